#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "omrl/commands.hpp"
#include "omrl/errors.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int steps_override = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config file");
  cmd->add_option("--preset", opts.preset, "named preset experiment");
  cmd->add_option("--seed", [&opts](const std::vector<std::string>& v) {
    opts.seed = std::stoull(v.front());
    return true;
  }, "override rl.seed");
  cmd->add_option("--out", opts.out_dir, "override output.dir");
  cmd->add_option("--steps-override", opts.steps_override, "override schedule.steps");
}

omrl::ExperimentConfig resolve_config(const CommonOpts& opts) {
  if (opts.config_path.empty() == opts.preset.empty())
    throw omrl::ConfigError("pass exactly one of --config or --preset");
  omrl::ExperimentConfig cfg = opts.config_path.empty()
                                   ? omrl::preset_config(opts.preset)
                                   : omrl::load_config(opts.config_path);
  if (opts.seed) cfg.rl.seed = *opts.seed;
  if (!opts.out_dir.empty()) cfg.output.dir = opts.out_dir;
  if (opts.steps_override > 0) cfg.schedule.steps = opts.steps_override;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pulsed-drive shaping for nonclassical mechanical states"};
  app.require_subcommand(1);

  CommonOpts train_opts, eval_opts, sweep_opts, wigner_opts, validate_opts;

  auto* train_cmd = app.add_subcommand("train", "optimize a pulse schedule with DDPG");
  add_common(train_cmd, train_opts);

  auto* eval_cmd = app.add_subcommand("evaluate", "replay a schedule or checkpoint noise-free");
  add_common(eval_cmd, eval_opts);
  std::string eval_schedule, eval_checkpoint;
  eval_cmd->add_option("--schedule", eval_schedule, "schedule CSV to replay");
  eval_cmd->add_option("--checkpoint", eval_checkpoint, "policy checkpoint to roll out");

  auto* sweep_cmd = app.add_subcommand("sweep", "train across a dissipation parameter");
  add_common(sweep_cmd, sweep_opts);
  std::string sweep_param;
  std::vector<double> sweep_values;
  sweep_cmd->add_option("--param", sweep_param, "kappa, gamma_m, or n_th")->required();
  sweep_cmd->add_option("--values", sweep_values, "parameter values")->required()->delimiter(',');

  auto* wigner_cmd = app.add_subcommand("wigner", "Wigner grid of the target or an evolved state");
  add_common(wigner_cmd, wigner_opts);
  std::string wigner_schedule;
  wigner_cmd->add_option("--schedule", wigner_schedule, "schedule CSV to evolve first");

  auto* validate_cmd = app.add_subcommand("validate", "off-resonance drive validation");
  add_common(validate_cmd, validate_opts);
  std::string validate_schedule;
  double validate_margin = 10.0;
  std::optional<double> validate_omega;
  validate_cmd->add_option("--schedule", validate_schedule, "schedule CSV for the peak amplitude");
  validate_cmd->add_option("--margin", validate_margin, "required ratio margin");
  validate_cmd->add_option("--omega-max", [&validate_omega](const std::vector<std::string>& v) {
    validate_omega = std::stod(v.front());
    return true;
  }, "explicit peak amplitude");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) {
      omrl::cmd_train(resolve_config(train_opts), std::cout);
    } else if (eval_cmd->parsed()) {
      std::optional<std::string> sched, ckpt;
      if (!eval_schedule.empty()) sched = eval_schedule;
      if (!eval_checkpoint.empty()) ckpt = eval_checkpoint;
      omrl::cmd_evaluate(resolve_config(eval_opts), sched, ckpt, std::cout);
    } else if (sweep_cmd->parsed()) {
      omrl::cmd_sweep(resolve_config(sweep_opts), sweep_param, sweep_values, std::cout);
    } else if (wigner_cmd->parsed()) {
      std::optional<std::string> sched;
      if (!wigner_schedule.empty()) sched = wigner_schedule;
      omrl::cmd_wigner(resolve_config(wigner_opts), sched, std::cout);
    } else if (validate_cmd->parsed()) {
      std::optional<std::string> sched;
      if (!validate_schedule.empty()) sched = validate_schedule;
      return omrl::cmd_validate(resolve_config(validate_opts), sched, validate_omega,
                                validate_margin, std::cout);
    }
  } catch (const omrl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const omrl::PhysicsError& e) {
    std::cerr << "physics error: " << e.what() << "\n";
    return 3;
  } catch (const omrl::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
