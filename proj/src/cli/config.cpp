#include "cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "abcage/units.hpp"

namespace abcage::cli {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out = "invalid configuration:";
  for (const auto& p : items) out += "\n  - " + p;
  return out;
}

class Reader {
 public:
  Reader(const json& j, std::string prefix, std::vector<std::string>& problems)
      : j_(j), prefix_(std::move(prefix)), problems_(problems) {
    if (!j_.is_object() && !j_.is_null()) fail("", "expected a JSON object");
  }

  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }

  double number(const std::string& key, double fallback) {
    if (!take(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) {
      fail(key, "expected a number");
      return fallback;
    }
    return v.get<double>();
  }

  int integer(const std::string& key, int fallback) {
    if (!take(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) {
      fail(key, "expected an integer");
      return fallback;
    }
    return v.get<int>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!take(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) {
      fail(key, "expected a string");
      return fallback;
    }
    return v.get<std::string>();
  }

  double angle(const std::string& key, double fallback) {
    if (!take(key)) return fallback;
    const json& v = j_.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return convert(key, v.get<std::string>(), units::parse_angle, fallback);
    fail(key, "expected radians or a string such as \"0.25 pi\"");
    return fallback;
  }

  double length(const std::string& key, double fallback) {
    return with_unit(key, fallback, units::parse_length);
  }
  double inverse_length(const std::string& key, double fallback) {
    return with_unit(key, fallback, units::parse_inverse_length);
  }

  const json& child(const std::string& key) {
    static const json empty = json::object();
    if (!take(key)) return empty;
    return j_.at(key);
  }

  void require(bool ok, const std::string& key, const std::string& message) {
    if (!ok) fail(key, message);
  }

  void finish() {
    if (!j_.is_object()) return;
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) fail(item.key(), "unknown key");
  }

  std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

 private:
  bool take(const std::string& key) {
    seen_.insert(key);
    return has(key) && !j_.at(key).is_null();
  }

  void fail(const std::string& key, const std::string& message) {
    problems_.push_back((key.empty() ? (prefix_.empty() ? "<root>" : prefix_) : path(key)) + ": " +
                        message);
  }

  template <class Parse>
  double convert(const std::string& key, const std::string& text, Parse parse, double fallback) {
    try {
      return parse(text);
    } catch (const std::exception& e) {
      fail(key, e.what());
      return fallback;
    }
  }

  template <class Parse>
  double with_unit(const std::string& key, double fallback, Parse parse) {
    if (!take(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) {
      fail(key, "expected a quantity with an explicit unit, e.g. \"10 cm^-1\"");
      return fallback;
    }
    return convert(key, v.get<std::string>(), parse, fallback);
  }

  const json& j_;
  std::string prefix_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
};

void raise_if(const std::vector<std::string>& problems) {
  if (!problems.empty()) throw ConfigError(problems);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({"'" + path + "': " + e.what()});
  }
}

BandsConfig parse_bands(const json& j) {
  std::vector<std::string> problems;
  Reader r(j, "", problems);
  BandsConfig c;
  c.kappa = r.number("kappa", c.kappa);
  c.gamma = r.angle("gamma", c.gamma);
  c.q_points = r.integer("q_points", c.q_points);
  r.require(c.kappa > 0.0 && std::isfinite(c.kappa), "kappa", "must be positive");
  r.require(std::isfinite(c.gamma), "gamma", "must be finite");
  r.require(c.q_points >= 1, "q_points", "must be at least 1");
  r.finish();
  raise_if(problems);
  return c;
}

QuasienergyConfig parse_quasienergy(const json& j) {
  std::vector<std::string> problems;
  Reader r(j, "", problems);
  QuasienergyConfig c;
  c.kappa = r.number("kappa", c.kappa);
  c.omega_over_kappa = r.number("omega_over_kappa", c.omega_over_kappa);
  c.order = r.integer("order", c.order);
  c.phi = r.angle("phi", c.phi);
  c.gamma_min = r.number("gamma_min", c.gamma_min);
  c.gamma_max = r.number("gamma_max", c.gamma_max);
  c.gamma_points = r.integer("gamma_points", c.gamma_points);
  c.q_points = r.integer("q_points", c.q_points);
  c.steps_per_period = r.integer("steps_per_period", c.steps_per_period);
  c.collapse_threshold = r.number("collapse_threshold", c.collapse_threshold);
  r.require(c.kappa > 0.0, "kappa", "must be positive");
  r.require(c.omega_over_kappa > 0.0, "omega_over_kappa", "must be positive");
  r.require(c.order >= 1, "order", "must be a positive integer");
  r.require(std::isfinite(c.phi), "phi", "must be finite");
  r.require(c.gamma_min >= 0.0, "gamma_min", "must be non-negative");
  r.require(c.gamma_max >= c.gamma_min, "gamma_max", "must not be below gamma_min");
  r.require(c.gamma_points >= 1, "gamma_points", "must be at least 1");
  r.require(c.q_points >= 1, "q_points", "must be at least 1");
  r.require(c.steps_per_period >= 1, "steps_per_period", "must be positive");
  r.require(c.collapse_threshold > 0.0, "collapse_threshold", "must be positive");
  r.finish();
  raise_if(problems);
  return c;
}

PropagateConfig parse_propagate(const json& j) {
  std::vector<std::string> problems;
  Reader r(j, "", problems);
  PropagateConfig c;
  c.kappa = r.number("kappa", c.kappa);
  c.omega_over_kappa = r.number("omega_over_kappa", c.omega_over_kappa);
  c.order = r.integer("order", c.order);
  c.gamma_norm = r.number("gamma_norm", c.gamma_norm);
  c.phi = r.angle("phi", c.phi);
  c.beta0 = r.number("beta0", c.beta0);
  c.mode = r.text("mode", c.mode);
  c.n_min = r.integer("n_min", c.n_min);
  c.n_max = r.integer("n_max", c.n_max);
  const std::string boundary = r.text("boundary", to_string(c.boundary));
  c.kappa_t_end = r.number("kappa_t_end", c.kappa_t_end);
  c.samples_per_period = r.integer("samples_per_period", c.samples_per_period);
  c.drift_per_kappa_t = r.number("drift_per_kappa_t", c.drift_per_kappa_t);
  c.crosscheck_tolerance = r.number("crosscheck_tolerance", c.crosscheck_tolerance);

  r.require(c.kappa >= 0.0, "kappa", "must be non-negative");
  r.require(c.omega_over_kappa > 0.0, "omega_over_kappa", "must be positive");
  r.require(c.order >= 1, "order", "must be a positive integer");
  r.require(c.gamma_norm >= 0.0, "gamma_norm", "must be non-negative");
  r.require(c.mode == "lab" || c.mode == "gauged" || c.mode == "effective" || c.mode == "cross-check",
            "mode", "expected lab, gauged, effective or cross-check");
  r.require(c.n_max >= c.n_min + 1, "n_max", "window needs at least two cells");
  try {
    c.boundary = boundary_from_string(boundary);
  } catch (const std::exception& e) {
    r.require(false, "boundary", e.what());
  }
  r.require(!((c.mode == "lab" || c.mode == "cross-check") && c.boundary == Boundary::periodic),
            "boundary", "the lab frame needs an open boundary");
  r.require(c.kappa_t_end > 0.0, "kappa_t_end", "must be positive");
  r.require(c.samples_per_period >= 1, "samples_per_period", "must be at least 1");
  r.require(c.drift_per_kappa_t > 0.0, "drift_per_kappa_t", "must be positive");
  r.require(c.crosscheck_tolerance > 0.0, "crosscheck_tolerance", "must be positive");

  const json& init = r.child("initial");
  Reader ir(init, "initial", problems);
  InitialCondition& ic = c.initial;
  ic.type = ir.text("type", ic.type);
  const std::string kind = ir.text("kind", "a");
  ic.cell = ir.integer("cell", ic.cell);
  ic.energy = ir.number("energy", ic.energy);
  ic.center = ir.number("center", ic.center);
  ic.width = ir.number("width", ic.width);
  ic.momentum = ir.number("momentum", ic.momentum);
  ir.require(ic.type == "site" || ic.type == "compact" || ic.type == "gaussian", "type",
             "expected site, compact or gaussian");
  if (kind.size() == 1 && (kind[0] == 'a' || kind[0] == 'b' || kind[0] == 'c'))
    ic.kind = site_kind_from_char(kind[0]);
  else
    ir.require(false, "kind", "expected a, b or c");
  ir.require(ic.energy == 0.0 || ic.energy == 2.0 || ic.energy == -2.0, "energy",
             "compact states exist at 0, +2 and -2 (units of kappa)");
  ir.require(ic.width > 0.0, "width", "must be positive");
  if (ic.type == "site") ir.require(ic.cell >= c.n_min && ic.cell <= c.n_max, "cell", "outside the window");
  if (ic.type == "compact")
    ir.require(ic.cell - 1 >= c.n_min && ic.cell <= c.n_max, "cell", "cage does not fit in the window");
  ir.finish();
  r.finish();
  raise_if(problems);
  return c;
}

DesignConfig parse_design(const json& j) {
  std::vector<std::string> problems;
  Reader r(j, "", problems);
  DesignConfig c;
  PhysicalDesign& d = c.design;
  d.wavelength = r.length("wavelength", d.wavelength);
  d.substrate_index = r.number("substrate_index", d.substrate_index);
  d.half_spacing = r.length("half_spacing", d.half_spacing);
  d.kappa = r.inverse_length("kappa", d.kappa);
  d.sigma = r.inverse_length("sigma", d.sigma);
  d.omega = r.inverse_length("omega", d.omega);
  d.gamma_norm = r.number("gamma_norm", d.gamma_norm);
  c.kappa_t_end = r.number("kappa_t_end", c.kappa_t_end);
  r.require(d.wavelength > 0.0, "wavelength", "must be positive");
  r.require(d.substrate_index > 1.0, "substrate_index", "must exceed 1");
  r.require(d.half_spacing > 0.0, "half_spacing", "must be positive");
  r.require(d.kappa > 0.0, "kappa", "must be positive");
  r.require(d.sigma > 0.0, "sigma", "must be positive");
  r.require(d.omega > 0.0, "omega", "must be positive");
  r.require(d.gamma_norm >= 0.0, "gamma_norm", "must be non-negative");
  r.require(c.kappa_t_end >= 0.0, "kappa_t_end", "must be non-negative");
  r.finish();
  raise_if(problems);
  return c;
}

json to_json(const BandsConfig& c) {
  return {{"kappa", c.kappa}, {"gamma", c.gamma}, {"q_points", c.q_points}};
}

json to_json(const QuasienergyConfig& c) {
  return {{"kappa", c.kappa},
          {"omega_over_kappa", c.omega_over_kappa},
          {"order", c.order},
          {"phi", c.phi},
          {"gamma_min", c.gamma_min},
          {"gamma_max", c.gamma_max},
          {"gamma_points", c.gamma_points},
          {"q_points", c.q_points},
          {"steps_per_period", c.steps_per_period},
          {"collapse_threshold", c.collapse_threshold}};
}

json to_json(const PropagateConfig& c) {
  const InitialCondition& ic = c.initial;
  return {{"kappa", c.kappa},
          {"omega_over_kappa", c.omega_over_kappa},
          {"order", c.order},
          {"gamma_norm", c.gamma_norm},
          {"phi", c.phi},
          {"beta0", c.beta0},
          {"mode", c.mode},
          {"n_min", c.n_min},
          {"n_max", c.n_max},
          {"boundary", to_string(c.boundary)},
          {"kappa_t_end", c.kappa_t_end},
          {"samples_per_period", c.samples_per_period},
          {"drift_per_kappa_t", c.drift_per_kappa_t},
          {"crosscheck_tolerance", c.crosscheck_tolerance},
          {"initial",
           {{"type", ic.type},
            {"kind", std::string(1, to_char(ic.kind))},
            {"cell", ic.cell},
            {"energy", ic.energy},
            {"center", ic.center},
            {"width", ic.width},
            {"momentum", ic.momentum}}}};
}

json to_json(const DesignConfig& c) {
  auto si = [](double v, const char* unit) {
    std::ostringstream os;
    os.precision(17);
    os << v << ' ' << unit;
    return os.str();
  };
  const PhysicalDesign& d = c.design;
  return {{"wavelength", si(d.wavelength, "m")},
          {"substrate_index", d.substrate_index},
          {"half_spacing", si(d.half_spacing, "m")},
          {"kappa", si(d.kappa, "m^-1")},
          {"sigma", si(d.sigma, "m^-1")},
          {"omega", si(d.omega, "m^-1")},
          {"gamma_norm", d.gamma_norm},
          {"kappa_t_end", c.kappa_t_end}};
}

}  // namespace abcage::cli
