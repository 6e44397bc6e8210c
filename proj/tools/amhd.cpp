// amhd: run, sweep, verify and fit anisotropic MHD / tropical climate model simulations.

#include "amhd/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral solver for MHD and tropical climate models with horizontal dissipation"};
  app.set_version_flag("--version", amhd::software_version);
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run one simulation from a key=value config file");
  run->add_option("config", run_config, "Configuration file")->required();

  std::string level = "fast";
  std::vector<std::string> faults;
  auto* verify = app.add_subcommand("verify", "Run the built-in verification checks");
  verify->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--inject-fault", faults, "Replace a component by a broken version")->group("");

  std::string sweep_config, axis, values;
  auto* sweep = app.add_subcommand("sweep", "Run one simulation per value of a config parameter");
  sweep->add_option("config", sweep_config, "Template configuration file")->required();
  sweep->add_option("--axis", axis, "Parameter to vary")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();

  std::string csv, column, window;
  auto* fit = app.add_subcommand("fit", "Fit an exponential decay rate to a CSV column");
  fit->add_option("csv", csv, "Diagnostics CSV")->required();
  fit->add_option("--column", column, "Column name")->required();
  fit->add_option("--window", window, "Fit window t0:t1")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : amhd::exit_code::invalid;
  }

  if (*run) return amhd::cmd_run(run_config, std::cout, std::cerr);
  if (*verify) {
    amhd::VerifyOptions options;
    options.level = level == "full" ? amhd::VerifyLevel::full : amhd::VerifyLevel::fast;
    options.faults.insert(faults.begin(), faults.end());
    return amhd::cmd_verify(options, std::cout);
  }
  if (*sweep) {
    std::vector<std::string> list;
    std::stringstream ss(values);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) list.push_back(item);
    }
    return amhd::cmd_sweep(sweep_config, axis, list, std::cout, std::cerr);
  }
  return amhd::cmd_fit(csv, column, window, std::cout, std::cerr);
}
