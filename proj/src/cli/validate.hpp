#pragma once

#include <string>
#include <vector>

#include "abcage/floquet.hpp"

namespace abcage::cli {

struct PropertyResult {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct ValidationOptions {
  bool quick = false;
  FaultInjection fault = FaultInjection::none;
  int threads = 1;
};

/// Built-in property battery over all modules. Exceptions thrown by a property
/// count as a failure of that property only.
std::vector<PropertyResult> run_validation(const ValidationOptions& opts);

}  // namespace abcage::cli
