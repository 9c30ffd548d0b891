#pragma once

// Run configurations for the command-line tool. Each command reads one JSON
// document; every field is optional and has a default. Validation collects
// every problem before reporting.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "abcage/common.hpp"
#include "abcage/design.hpp"
#include "abcage/lattice.hpp"

namespace abcage::cli {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct BandsConfig {
  double kappa = 1.0;
  double gamma = pi;
  int q_points = 256;
};

struct QuasienergyConfig {
  double kappa = 1.0;
  double omega_over_kappa = 15.0;
  int order = 1;
  double phi = pi / 4.0;
  double gamma_min = 0.0;
  double gamma_max = 4.0;
  int gamma_points = 81;
  int q_points = 64;
  int steps_per_period = 400;
  double collapse_threshold = 0.1;  // in units of kappa
};

struct InitialCondition {
  std::string type = "site";  // site | compact | gaussian
  SiteKind kind = SiteKind::a;
  int cell = 0;
  double energy = 0.0;  // compact: 0, +2 or -2 (units of kappa)
  double center = 0.0;
  double width = 3.0;
  double momentum = 0.0;
};

struct PropagateConfig {
  double kappa = 1.0;
  double omega_over_kappa = 10.0;
  int order = 1;
  double gamma_norm = 2.0;
  double phi = pi / 4.0;
  double beta0 = 0.0;
  std::string mode = "gauged";  // lab | gauged | effective | cross-check
  int n_min = -30;
  int n_max = 30;
  Boundary boundary = Boundary::open;
  double kappa_t_end = 10.0;
  int samples_per_period = 8;
  double drift_per_kappa_t = 1e-8;
  InitialCondition initial{};
  double crosscheck_tolerance = 1e-6;
};

struct DesignConfig {
  PhysicalDesign design{};
  double kappa_t_end = 10.0;
};

BandsConfig parse_bands(const nlohmann::json& j);
QuasienergyConfig parse_quasienergy(const nlohmann::json& j);
PropagateConfig parse_propagate(const nlohmann::json& j);
DesignConfig parse_design(const nlohmann::json& j);

nlohmann::json to_json(const BandsConfig& c);
nlohmann::json to_json(const QuasienergyConfig& c);
nlohmann::json to_json(const PropagateConfig& c);
nlohmann::json to_json(const DesignConfig& c);

/// Reads a JSON file; throws ConfigError on I/O or syntax errors.
nlohmann::json load_json(const std::string& path);

}  // namespace abcage::cli
