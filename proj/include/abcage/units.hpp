#pragma once

#include <string_view>

namespace abcage::units {

// Quantities are strings "<number> <unit>"; whitespace between them is optional.
// Results are SI.

/// m, cm, mm, um (or µm), nm.
double parse_length(std::string_view text);
/// m^-1, cm^-1, mm^-1 (also written 1/m, 1/cm, /cm, ...).
double parse_inverse_length(std::string_view text);
/// Plain number (radians), or with unit rad, deg, or pi (e.g. "0.25 pi").
double parse_angle(std::string_view text);

}  // namespace abcage::units
