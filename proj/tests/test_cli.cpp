#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace fs = std::filesystem;
using namespace abcage::cli;

namespace {

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("abcage_test_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }

  std::string config(const nlohmann::json& j) const {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << j.dump();
    return p.string();
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(const std::string& cmd, CommandOptions opts, std::string* stdout_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_command(cmd, opts, out, err);
  if (stdout_text) *stdout_text = out.str();
  return code;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config validation failures exit 2 and write nothing") {
  Scratch s("config");
  CommandOptions o;
  o.out_dir = (s.dir / "out").string();

  o.config_path = s.config({{"kappa", -1.0}});
  CHECK(run("bands", o) == kExitConfig);
  CHECK(run("quasienergy", o) == kExitConfig);
  CHECK(run("propagate", o) == kExitConfig);
  CHECK_FALSE(fs::exists(s.dir / "out" / "bands.csv"));

  o.config_path = s.config({{"kappa", 0.0}});
  CHECK(run("bands", o) == kExitConfig);

  o.config_path = s.config({{"kapa", 1.0}});
  CHECK(run("bands", o) == kExitConfig);

  o.config_path = s.config({{"mode", "lab"}, {"boundary", "periodic"}});
  CHECK(run("propagate", o) == kExitConfig);

  o.config_path = s.config({{"wavelength", 633e-9}});  // design quantities need units
  CHECK(run("design", o) == kExitConfig);

  o.config_path = (s.dir / "missing.json").string();
  CHECK(run("bands", o) == kExitConfig);
  CHECK_FALSE(fs::exists(s.dir / "out"));
}

TEST_CASE("problems are collected, not reported one at a time") {
  try {
    parse_quasienergy({{"kappa", -1.0}, {"q_points", 0}, {"order", 0}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.problems().size() == 3);
  }
}

TEST_CASE("bands: header echoes config and version, values at 17 digits") {
  Scratch s("bands");
  CommandOptions o;
  o.out_dir = s.dir.string();
  o.config_path = s.config({{"gamma", "1 pi"}, {"q_points", 16}});
  REQUIRE(run("bands", o) == kExitOk);
  const std::string csv = slurp(s.dir / "bands.csv");
  CHECK(csv.rfind("# abcage " ABCAGE_VERSION " bands config=", 0) == 0);
  CHECK(csv.find("\"q_points\":16") != std::string::npos);
  CHECK(csv.find("q,E_minus,E_zero,E_plus\n") != std::string::npos);
  CHECK(csv.find("-3.1415926535897931,") != std::string::npos);
  CHECK(fs::exists(s.dir / "compact_states.json"));
}

TEST_CASE("quasienergy output is identical for any thread count") {
  Scratch s("sweep");
  const auto cfg = nlohmann::json{{"gamma_points", 3}, {"q_points", 4}, {"omega_over_kappa", 5.0}};
  CommandOptions o;
  o.config_path = s.config(cfg);
  o.out_dir = (s.dir / "one").string();
  o.threads = 1;
  REQUIRE(run("quasienergy", o) == kExitOk);
  o.out_dir = (s.dir / "three").string();
  o.threads = 3;
  REQUIRE(run("quasienergy", o) == kExitOk);
  const std::string a = slurp(s.dir / "one" / "quasienergy.csv");
  CHECK(a == slurp(s.dir / "three" / "quasienergy.csv"));
  CHECK(a.find("gamma_norm,q,eps1,eps2,eps3,eps1_eff,eps2_eff,eps3_eff\n") != std::string::npos);
}

TEST_CASE("propagate: kappa = 0 leaves a single excitation in place") {
  Scratch s("still");
  CommandOptions o;
  o.out_dir = s.dir.string();
  o.config_path = s.config({{"kappa", 0.0}, {"n_min", -4}, {"n_max", 4}, {"kappa_t_end", 1.0}});
  REQUIRE(run("propagate", o) == kExitOk);
  std::istringstream summary(slurp(s.dir / "summary.csv"));
  std::string line;
  std::getline(summary, line);  // config
  std::getline(summary, line);
  CHECK(line == "t,norm,PR,leakage,return_intensity");
  int rows = 0;
  while (std::getline(summary, line)) {
    ++rows;
    CHECK(line.find(",1,1,0,1") != std::string::npos);
  }
  CHECK(rows > 2);
}

TEST_CASE("propagate: cross-check passes, impossible drift budget exits 3") {
  Scratch s("cross");
  CommandOptions o;
  o.out_dir = s.dir.string();
  o.config_path = s.config({{"mode", "cross-check"}, {"n_min", -6}, {"n_max", 6}, {"kappa_t_end", 1.0}});
  std::string text;
  CHECK(run("propagate", o, &text) == kExitOk);
  CHECK(text.find("PASS") != std::string::npos);

  o.config_path = s.config({{"drift_per_kappa_t", 1e-300}, {"n_min", -6}, {"n_max", 6}, {"kappa_t_end", 2.0}});
  CHECK(run("propagate", o) == kExitNumerical);
}

TEST_CASE("fault injection in a sweep is a numerical failure") {
  Scratch s("fault");
  CommandOptions o;
  o.out_dir = s.dir.string();
  o.config_path = s.config({{"gamma_points", 2}, {"q_points", 2}});
  o.fault = abcage::FaultInjection::kappa_sign_flip;
  CHECK(run("quasienergy", o) == kExitNumerical);
}

TEST_CASE("design: JSON output and unit handling") {
  Scratch s("design");
  CommandOptions o;
  o.json = true;
  o.config_path = s.config({{"kappa", "1 cm^-1"}, {"sigma", "10 cm^-1"}, {"omega", "10 cm^-1"},
                            {"wavelength", "633 nm"}, {"half_spacing", "13.5 um"}});
  std::string text;
  REQUIRE(run("design", o, &text) == kExitOk);
  const auto doc = nlohmann::json::parse(text);
  CHECK(doc["bend_radius_m"].get<double>() == doctest::Approx(0.1956).epsilon(5e-3));
  CHECK(doc["omega_over_kappa"].get<double>() == doctest::Approx(10.0));
  CHECK_FALSE(fs::exists("design.json"));
}

TEST_CASE("thread resolution") {
  CHECK(resolve_threads(4) == 4);
  ::setenv("ABCAGE_THREADS", "3", 1);
  CHECK(resolve_threads(std::nullopt) == 3);
  ::setenv("ABCAGE_THREADS", "zero", 1);
  CHECK(resolve_threads(std::nullopt) == 1);
  ::unsetenv("ABCAGE_THREADS");
  CHECK(resolve_threads(std::nullopt) == 1);
}

}
