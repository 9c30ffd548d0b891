// abcage: command-line front end. See README for the configuration format.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace abcage::cli;

  CLI::App app{"Aharonov-Bohm caging in driven rhombic waveguide lattices"};
  app.set_version_flag("--version", ABCAGE_VERSION);
  app.require_subcommand(1);

  CommandOptions opts;
  std::string config;
  std::string out_dir;
  std::optional<int> threads;
  std::string fault;

  const std::map<std::string, std::string> help = {
      {"bands", "static Bloch bands and compact flat-band states"},
      {"quasienergy", "Floquet quasi-energy sweep over the drive amplitude"},
      {"propagate", "real-space propagation of a single excitation"},
      {"design", "physical fabrication parameters for a normalized design"},
      {"validate", "run the built-in property battery"},
  };
  for (const auto& [name, text] : help) {
    CLI::App* sub = app.add_subcommand(name, text);
    if (name != "validate") sub->add_option("--config", config, "JSON configuration file")->check(CLI::ExistingFile);
    if (name != "validate" && name != "design") sub->add_option("--out", out_dir, "output directory");
    if (name == "design") {
      sub->add_option("--out", out_dir, "also write design.json here");
      sub->add_flag("--json", opts.json, "print JSON instead of text");
    }
    if (name == "quasienergy" || name == "validate")
      sub->add_option("--threads", threads, "worker threads (default: ABCAGE_THREADS or 1)")->check(CLI::PositiveNumber);
    if (name != "bands" && name != "design") sub->add_flag("--quick", opts.quick, "reduced grids and run lengths");
    if (name == "validate" || name == "quasienergy")
      sub->add_option("--inject-fault", fault)->check(CLI::IsMember({"kappa-sign-flip"}))->group("");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  if (!config.empty()) opts.config_path = config;
  if (!out_dir.empty()) opts.out_dir = out_dir;
  if (fault == "kappa-sign-flip") opts.fault = abcage::FaultInjection::kappa_sign_flip;
  try {
    opts.threads = resolve_threads(threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return run_command(name, opts, std::cout, std::cerr);
}
