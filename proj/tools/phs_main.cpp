#include <phs/cli.hpp>

#include "CLI11.hpp"

#include <cstdio>
#include <exception>

int main(int argc, char** argv) {
  CLI::App app{"certify and simulate 1D two-component port-Hamiltonian "
               "systems with resistive interfaces"};
  app.require_subcommand(1);

  phs::CliOptions opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON config file")
        ->required();
    sub->add_option("--out", opt.out_override,
                    "output directory (overrides the config)");
    sub->add_option("--seed", opt.seed, "seed override for all randomness")
        ->each([&](const std::string&) { opt.has_seed = true; });
  };
  add_common(app.add_subcommand("check", "classify the boundary/interface data"));
  add_common(app.add_subcommand(
      "simulate", "integrate the system and emit energy/trajectory CSVs"));
  add_common(app.add_subcommand("spectrum",
                                "eigenvalues of the reduced generator"));
  add_common(app.add_subcommand(
      "transform-verify",
      "check the interface-to-boundary rewrite preserves inner products"));

  CLI11_PARSE(app, argc, argv);
  opt.command = app.get_subcommands().front()->get_name();

  try {
    return phs::run_command(opt);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
