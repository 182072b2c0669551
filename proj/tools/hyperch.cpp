// hyperch: batch front end for simulations, tau sweeps, self-checks and reports.

#include <CLI11.hpp>

#include <iostream>

#include "hyperch/commands.hpp"
#include "hyperch/error.hpp"

namespace fs = std::filesystem;
using namespace hyperch;

int main(int argc, char** argv) {
  CLI::App app{"Galerkin solver for the relaxed sixth-order Cahn-Hilliard system"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int jobs = 1;

  auto* sim = app.add_subcommand("simulate", "run one configuration with a single tau");
  sim->add_option("--config", config_path, "experiment YAML")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", out_dir, "output directory (overrides config 'output')");

  auto* sweep = app.add_subcommand("sweep-tau", "error norms against tau = 0 over tau_list");
  sweep->add_option("--config", config_path, "experiment YAML")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out_dir, "output directory (overrides config 'output')");
  sweep->add_option("--jobs", jobs, "concurrent tau runs")->check(CLI::PositiveNumber);

  bool list = false, fault = false;
  auto* ver = app.add_subcommand("verify", "run the built-in oracle and identity checks");
  ver->add_option("--config", config_path, "take domain and potential from this YAML")
      ->check(CLI::ExistingFile);
  ver->add_flag("--list", list, "print check names only");
  ver->add_flag("--inject-fault", fault, "negate the nonlinear remainder (self-test of verify)");
  ver->add_option("--out", out_dir, "also write verify.json here");

  std::vector<std::string> dirs;
  auto* rep = app.add_subcommand("report", "summarize result directories");
  rep->add_option("dirs", dirs, "result directories")->required();
  rep->add_option("--out", out_dir, "write report.csv here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim || *sweep) {
      const ExperimentConfig cfg = load_config(config_path);
      const fs::path out = out_dir.empty() ? fs::path(cfg.output) : fs::path(out_dir);
      return *sim ? simulate(cfg, out, std::cout, std::cerr)
                  : sweep_tau(cfg, out, jobs, std::cout, std::cerr);
    }
    if (*ver) {
      if (list) {
        for (const auto& name : verify_check_names()) std::cout << name << "\n";
        return 0;
      }
      VerifyOptions opts;
      opts.inject_sign_fault = fault;
      if (!config_path.empty()) opts.config = load_config(config_path);
      std::optional<fs::path> out;
      if (!out_dir.empty()) out = out_dir;
      return verify(opts, out, std::cout, std::cerr);
    }
    std::vector<fs::path> paths(dirs.begin(), dirs.end());
    std::optional<fs::path> out;
    if (!out_dir.empty()) out = out_dir;
    return report(paths, out, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
