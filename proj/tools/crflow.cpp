#include <iostream>

#include "CLI11.hpp"
#include "crflow/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Cross-resonance gate parameters, echo errors and collision tables"};
  app.require_subcommand(1);

  crflow::RunConfig cfg;
  std::vector<std::string> sweeps;
  std::string basis = "energy";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--spec", cfg.spec_path, "device spec (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--order", cfg.order, "perturbation order")->check(CLI::IsMember({2, 4}));
    sub->add_option("--basis", basis, "energy or kerr")->check(CLI::IsMember({"energy", "kerr"}));
    sub->add_option("--sweep", sweeps, "VAR:MIN:MAX:STEP, repeat for a grid");
    sub->add_option("--out", cfg.out_path, "output file (stdout when absent)");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--guard-band", cfg.guard_band_mhz, "MHz masked around each collision")->check(CLI::NonNegativeNumber);
    sub->add_flag("--include-beta", cfg.include_beta, "add the beta shift to the third level");
    sub->add_flag("--no-rwa", cfg.no_rwa, "keep counter-rotating terms");
    sub->add_flag("--kerr-mode", cfg.kerr_mode, "harmonic matrix elements");
    sub->add_option("--zz-convention", cfg.zz_convention, "half or full")->check(CLI::IsMember({"half", "full"}));
    sub->add_option("--pole-tol", cfg.pole_tol_mhz, "MHz below which a denominator counts as a pole");
    sub->add_option("--threads", cfg.threads, "worker count (CRFLOW_THREADS otherwise)");
  };

  for (const char* name : {"params", "sweep", "echo-error", "collisions", "saturation", "spectator", "verify"}) {
    CLI::App* sub = app.add_subcommand(name, "");
    common(sub);
    sub->callback([&cfg, name] { cfg.command = name; });
  }
  app.get_subcommand("params")->description("rate table at the spec, both bases, or a sweep with --sweep");
  app.get_subcommand("sweep")->description("rates along one or more sweep axes");
  app.get_subcommand("echo-error")->description("echoed rates and coherent error");
  app.get_subcommand("collisions")->description("resonance table along the detuning axis");
  app.get_subcommand("saturation")->description("strong-drive ZX and IX curves");
  app.get_subcommand("spectator")->description("three-qubit rates");
  app.get_subcommand("verify")->description("engine checks against closed forms, parity and propagation");

  try {
    app.parse(argc, argv);
    cfg.basis = basis == "kerr" ? crflow::Basis::kerr : crflow::Basis::energy;
    for (const auto& s : sweeps) cfg.sweep.push_back(crflow::parse_sweep_axis(s));
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "crflow: " << e.what() << "\n";
    return 1;
  }
  return crflow::run(cfg, std::cout, std::cerr);
}
