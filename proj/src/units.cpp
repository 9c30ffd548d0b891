#include "abcage/units.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

namespace abcage::units {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits "<number><unit>" and returns the number; `unit` receives the trimmed rest.
double split(std::string_view text, std::string_view& unit) {
  text = trim(text);
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || !std::isfinite(value))
    throw std::invalid_argument("cannot parse a number from '" + std::string(text) + "'");
  unit = trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));
  return value;
}

double lookup(const std::map<std::string_view, double>& table, std::string_view unit,
              std::string_view text, const char* what) {
  const auto it = table.find(unit);
  if (it == table.end())
    throw std::invalid_argument("'" + std::string(text) + "': expected an explicit " + what +
                                " unit");
  return it->second;
}

}  // namespace

double parse_length(std::string_view text) {
  static const std::map<std::string_view, double> table = {
      {"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"µm", 1e-6}, {"nm", 1e-9}};
  std::string_view unit;
  const double v = split(text, unit);
  return v * lookup(table, unit, text, "length");
}

double parse_inverse_length(std::string_view text) {
  static const std::map<std::string_view, double> table = {
      {"m^-1", 1.0},   {"1/m", 1.0},   {"/m", 1.0},   {"cm^-1", 1e2}, {"1/cm", 1e2},
      {"/cm", 1e2},    {"mm^-1", 1e3}, {"1/mm", 1e3}, {"/mm", 1e3},   {"um^-1", 1e6},
      {"1/um", 1e6},   {"/um", 1e6}};
  std::string_view unit;
  const double v = split(text, unit);
  return v * lookup(table, unit, text, "inverse-length");
}

double parse_angle(std::string_view text) {
  static const std::map<std::string_view, double> table = {
      {"", 1.0}, {"rad", 1.0}, {"deg", std::numbers::pi / 180.0}, {"pi", std::numbers::pi}};
  std::string_view unit;
  const double v = split(text, unit);
  return v * lookup(table, unit, text, "angle");
}

}  // namespace abcage::units
