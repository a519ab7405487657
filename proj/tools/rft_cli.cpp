#include <iostream>

#include <CLI11.hpp>

#include "rft/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Transmission eigenvalue distribution from the matrix transport equation"};
  app.require_subcommand(1);

  std::string config;
  std::string outdir;
  int threads = 0;

  auto* solve = app.add_subcommand("solve", "run the configured scan");
  solve->add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);
  solve->add_option("--output-dir", outdir, "directory for spectrum.csv and summary.json");
  solve->add_option("--threads", threads, "worker threads for T points")->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "validate a config without computing");
  check->add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);

  auto* inv = app.add_subcommand("invariants", "run the invariant suite");
  inv->add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  rft::RunConfig cfg;
  try {
    cfg = rft::load_config(config);
  } catch (const rft::ValidationError& e) {
    for (const auto& m : e.messages) std::cerr << "invalid config: " << m << "\n";
    return rft::kExitFatal;
  } catch (const rft::Error& e) {
    std::cerr << e.kind() << ": " << e.what() << "\n";
    return rft::kExitFatal;
  }
  if (!outdir.empty()) cfg.output_dir = outdir;
  if (threads > 0) cfg.threads = threads;

  if (*check) {
    std::cout << "config ok: mode " << rft::mode_name(cfg.mode) << "\n";
    return rft::kExitOk;
  }
  if (*inv) return rft::run_invariants(cfg, std::cout);
  return rft::run(cfg, std::cerr);
}
