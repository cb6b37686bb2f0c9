// Command line driver: run / sweep / leadfield / spectrum / lcurve.
#include "memrx/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct CommonArgs {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("config", args.config_path, "experiment config file (JSON)")->required();
  cmd->add_option("--out", args.out, "override the output directory");
  cmd->add_option("--seed", args.seed, "override the master seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_flag("--quiet", args.quiet, "suppress progress output");
}

memrx::RunOptions to_options(const CommonArgs& args) {
  memrx::RunOptions opt;
  if (!args.out.empty()) opt.out_override = args.out;
  if (args.seed_set) opt.seed_override = args.seed;
  opt.quiet = args.quiet;
  return opt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ME-MRX simulation and reconstruction toolkit"};
  app.require_subcommand(1);

  CommonArgs run_args, sweep_args, lf_args, spec_args, lcurve_args;
  auto* run_cmd = app.add_subcommand("run", "run one experiment end to end");
  add_common(run_cmd, run_args);
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep over activation counts");
  add_common(sweep_cmd, sweep_args);
  auto* lf_cmd = app.add_subcommand("leadfield", "assemble and cache the lead field");
  add_common(lf_cmd, lf_args);
  auto* spec_cmd = app.add_subcommand("spectrum", "export the singular spectrum");
  add_common(spec_cmd, spec_args);
  auto* lcurve_cmd = app.add_subcommand("lcurve", "export the Tikhonov L-curve");
  add_common(lcurve_cmd, lcurve_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed())
      memrx::run_experiment(memrx::load_config(run_args.config_path), to_options(run_args));
    else if (sweep_cmd->parsed())
      memrx::run_sweep(memrx::load_config(sweep_args.config_path), to_options(sweep_args));
    else if (lf_cmd->parsed())
      memrx::run_leadfield_only(memrx::load_config(lf_args.config_path), to_options(lf_args));
    else if (spec_cmd->parsed())
      memrx::run_spectrum(memrx::load_config(spec_args.config_path), to_options(spec_args));
    else if (lcurve_cmd->parsed())
      memrx::run_lcurve(memrx::load_config(lcurve_args.config_path), to_options(lcurve_args));
  } catch (const std::invalid_argument& e) {
    std::cerr << "{\"error\":\"validation\",\"message\":\"" << e.what() << "\"}\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"numerical\",\"message\":\"" << e.what() << "\"}\n";
    return kExitNumerical;
  }
  return 0;
}
