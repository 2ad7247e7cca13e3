#include "omrl/commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "omrl/diagnostics.hpp"
#include "omrl/errors.hpp"
#include "omrl/io.hpp"

namespace omrl {

namespace {

namespace fs = std::filesystem;

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

std::string manifest_text(const ExperimentConfig& cfg, const std::string& status,
                          const TrainingReport* report) {
  std::ostringstream os;
  os << "# omrl run manifest (re-runnable config; comments carry run metadata)\n";
  os << "# version = " << kVersion << "\n";
  os << "# eigen = " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "."
     << EIGEN_MINOR_VERSION << "\n";
  os << "# status = " << status << "\n";
  if (report) {
    os << "# epochs_run = " << report->epochs_run << "\n";
    os << "# best_fidelity = " << format_double(report->best_fidelity_value) << "\n";
    os << "# best_epoch = " << report->best_epoch << "\n";
  }
  os << "\n" << serialize_config(cfg);
  return os.str();
}

// Per-step state trace shared by evaluate paths: trace error, fidelity and
// purity, plus the two-mode log negativity where it applies.
struct TraceResult {
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<double>> negativity_rows;
  Eigen::MatrixXcd final_mech;
  double final_fidelity = 0.0;
  double final_negativity = 0.0;
};

TraceResult trace_schedule(const ExperimentConfig& cfg, const LindbladModel& model,
                           const PulseSchedule& sched) {
  TraceResult res;
  const auto traj = model.evolve_episode(vacuum_density(cfg.system), sched, true);
  const Eigen::VectorXcd target = cfg.target.mech_vector(cfg.system.nm1, cfg.system.nm2);
  const double dt = sched.dt();
  for (std::size_t s = 0; s < traj.size(); ++s) {
    const Eigen::MatrixXcd mech = reduced_mech(traj[s], cfg.system);
    const double f = fidelity(mech, target);
    res.rows.push_back({static_cast<double>(s), s * dt, trace_error(traj[s]), f, purity(traj[s])});
    if (!cfg.system.is_single()) {
      const double n = log_negativity(mech, cfg.system.nm1, cfg.system.nm2);
      res.negativity_rows.push_back({static_cast<double>(s), s * dt, n});
      res.final_negativity = n;
    }
    if (s + 1 == traj.size()) {
      res.final_mech = mech;
      res.final_fidelity = f;
    }
  }
  return res;
}

void write_wigner_csv(const std::string& path, const WignerGrid& grid) {
  std::vector<std::vector<double>> rows;
  rows.reserve(grid.re_axis.size() * grid.im_axis.size());
  for (int i = 0; i < grid.re_axis.size(); ++i)
    for (int j = 0; j < grid.im_axis.size(); ++j)
      rows.push_back({grid.re_axis(i), grid.im_axis(j), grid.values(i, j)});
  write_csv(path, {"re_eta", "im_eta", "w"}, rows);
}

void write_fock_map_csv(const std::string& path, const Eigen::MatrixXd& map) {
  std::vector<std::vector<double>> rows;
  for (int n = 0; n < map.rows(); ++n)
    for (int m = 0; m < map.cols(); ++m)
      rows.push_back({static_cast<double>(n), static_cast<double>(m), map(n, m)});
  write_csv(path, {"row", "col", "abs_rho"}, rows);
}

PulseSchedule load_schedule_checked(const ExperimentConfig& cfg, const std::string& path) {
  PulseSchedule sched = read_schedule_csv(path);
  const DetuningSet expected = carrier_detunings(cfg.target, cfg.system);
  if (sched.detunings.size() != expected.size())
    throw ConfigError("schedule " + path + " has " + std::to_string(sched.detunings.size()) +
                      " pulses but the configured target needs " + std::to_string(expected.size()));
  for (int l = 0; l < expected.size(); ++l)
    if (std::abs(sched.detunings.deltas[l] - expected.deltas[l]) > 1e-9)
      throw ConfigError("schedule " + path + " detuning " + std::to_string(l + 1) +
                        " does not match the configured target");
  sched.validate(cfg.schedule.omega_max);
  return sched;
}

}  // namespace

TrainArtifacts cmd_train(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  ensure_dir(cfg.output.dir);
  const std::string dir = cfg.output.dir;

  Environment env(cfg.system, cfg.target, cfg.grid(), cfg.schedule.fidelity_mode);
  out << "training: target pulses L = " << env.action_dim() << ", state dim D = "
      << env.model().dim() << ", obs dim = " << env.obs_dim() << "\n";

  TrainingReport report;
  try {
    report = train(env, cfg.rl, dir, [&](int epoch, const TrainingReport& r) {
      if ((epoch + 1) % 25 == 0 || epoch == 0)
        out << "epoch " << epoch + 1 << "/" << cfg.rl.epochs
            << "  fidelity " << format_double(r.epoch_fidelity.back())
            << "  best " << format_double(r.best_fidelity_value) << "\n";
    });
  } catch (...) {
    write_text_file(dir + "/manifest.ini", manifest_text(cfg, "failed", nullptr));
    throw;
  }

  TrainArtifacts art;
  art.best_fidelity = report.best_fidelity_value;
  art.best_epoch = report.best_epoch;
  art.wall_seconds = report.wall_seconds;
  art.checkpoints = report.checkpoint_paths;

  // The wall_clock column carries the cumulative simulated control time, the
  // deterministic counterpart of elapsed time; measured seconds go to stdout.
  std::vector<std::vector<double>> log_rows, curve_rows;
  for (int e = 0; e < report.epochs_run; ++e) {
    log_rows.push_back({static_cast<double>(e), report.epoch_reward[e], report.best_fidelity[e],
                        report.noise_sigma[e], (e + 1) * cfg.schedule.total_time});
    curve_rows.push_back({static_cast<double>(e), report.epoch_fidelity[e],
                          report.best_fidelity[e]});
  }
  art.training_log = dir + "/training_log.csv";
  write_csv(art.training_log, {"epoch", "episode_reward", "best_fidelity", "noise_sigma", "wall_clock"},
            log_rows);
  art.fidelity_curve = dir + "/fidelity_curve.csv";
  write_csv(art.fidelity_curve, {"epoch", "fidelity", "best_fidelity"}, curve_rows);
  art.best_schedule = dir + "/best_schedule.csv";
  write_schedule_csv(art.best_schedule, report.best_schedule);
  art.manifest = dir + "/manifest.ini";
  write_text_file(art.manifest, manifest_text(cfg, "complete", &report));

  out << "best fidelity " << format_double(report.best_fidelity_value) << " at epoch "
      << report.best_epoch + 1 << " (" << report.epochs_run << " epochs, "
      << format_double(report.wall_seconds) << " s)\n";
  return art;
}

EvaluateArtifacts cmd_evaluate(const ExperimentConfig& cfg,
                               const std::optional<std::string>& schedule_path,
                               const std::optional<std::string>& checkpoint_path,
                               std::ostream& out) {
  cfg.validate();
  if (schedule_path.has_value() == checkpoint_path.has_value())
    throw ConfigError("evaluate needs exactly one of --schedule or --checkpoint");
  ensure_dir(cfg.output.dir);
  const std::string dir = cfg.output.dir;

  Environment env(cfg.system, cfg.target, cfg.grid(), cfg.schedule.fidelity_mode);
  EvaluateArtifacts art;
  PulseSchedule sched;
  if (schedule_path) {
    sched = load_schedule_checked(cfg, *schedule_path);
  } else {
    const Checkpoint ck = load_checkpoint(*checkpoint_path);
    if (static_cast<int>(ck.meta.state_dim) != env.model().dim() ||
        static_cast<int>(ck.meta.action_dim) != env.action_dim())
      throw ConfigError("checkpoint " + *checkpoint_path +
                        " was trained for a different system dimension or pulse count");
    Eigen::VectorXd obs = env.reset();
    while (!env.done()) {
      const Eigen::MatrixXf a = ck.actor.forward(obs.cast<float>());
      auto result = env.step(a.col(0).cast<double>());
      obs = std::move(result.obs);
    }
    sched = env.executed_schedule();
    art.schedule_csv = dir + "/schedule.csv";
    write_schedule_csv(art.schedule_csv, sched);
  }

  const TraceResult trace = trace_schedule(cfg, env.model(), sched);
  art.final_fidelity = trace.final_fidelity;
  art.final_log_negativity = trace.final_negativity;

  art.fidelity_trace = dir + "/fidelity_trace.csv";
  write_csv(art.fidelity_trace, {"step", "t", "trace_error", "fidelity", "purity"}, trace.rows);
  art.fock_map = dir + "/fock_map.csv";
  write_fock_map_csv(art.fock_map, fock_matrix_map(trace.final_mech));
  if (cfg.system.is_single()) {
    art.wigner_csv = dir + "/wigner.csv";
    write_wigner_csv(art.wigner_csv, wigner(trace.final_mech));
  } else {
    art.negativity_trace = dir + "/negativity_trace.csv";
    write_csv(art.negativity_trace, {"step", "t", "log_negativity"}, trace.negativity_rows);
  }

  out << "final fidelity " << format_double(art.final_fidelity);
  if (!cfg.system.is_single())
    out << ", final log negativity " << format_double(art.final_log_negativity);
  out << "\n";
  return art;
}

std::string cmd_sweep(const ExperimentConfig& cfg, const std::string& parameter,
                      const std::vector<double>& values, std::ostream& out) {
  cfg.validate();
  if (values.size() < 2) throw ConfigError("sweep needs at least two values");
  if (parameter != "kappa" && parameter != "gamma_m" && parameter != "n_th")
    throw ConfigError("sweep parameter must be kappa, gamma_m, or n_th");
  ensure_dir(cfg.output.dir);

  std::vector<std::vector<double>> rows;
  for (double v : values) {
    if (v < 0) throw ConfigError("sweep values must be >= 0");
    ExperimentConfig run = cfg;
    if (parameter == "kappa") run.system.kappa = v;
    if (parameter == "gamma_m") {
      run.system.gamma_m1 = v;
      if (!run.system.is_single()) run.system.gamma_m2 = v;
    }
    if (parameter == "n_th") {
      run.system.n_th1 = v;
      if (!run.system.is_single()) run.system.n_th2 = v;
    }
    std::ostringstream name;
    name << cfg.output.dir << "/" << parameter << "_" << format_double(v);
    run.output.dir = name.str();
    out << "sweep " << parameter << " = " << format_double(v) << "\n";
    const TrainArtifacts art = cmd_train(run, out);
    rows.push_back({v, art.best_fidelity});
  }
  const std::string path = cfg.output.dir + "/sweep.csv";
  write_csv(path, {parameter, "best_fidelity"}, rows);
  return path;
}

std::string cmd_wigner(const ExperimentConfig& cfg,
                       const std::optional<std::string>& schedule_path, std::ostream& out) {
  cfg.validate();
  if (!cfg.system.is_single())
    throw ConfigError("wigner maps are single-mode; use evaluate for two-resonator systems");
  ensure_dir(cfg.output.dir);

  Eigen::MatrixXcd mech;
  if (schedule_path) {
    LindbladModel model(cfg.system);
    const PulseSchedule sched = load_schedule_checked(cfg, *schedule_path);
    const auto traj = model.evolve_episode(vacuum_density(cfg.system), sched, false);
    mech = reduced_mech(traj.back(), cfg.system);
  } else {
    const Eigen::VectorXcd psi = cfg.target.mech_vector(cfg.system.nm1, cfg.system.nm2);
    mech = psi * psi.adjoint();
  }
  const std::string path = cfg.output.dir + "/wigner.csv";
  write_wigner_csv(path, wigner(mech));
  out << "wrote " << path << "\n";
  return path;
}

int cmd_validate(const ExperimentConfig& cfg, const std::optional<std::string>& schedule_path,
                 std::optional<double> omega_max, double margin, std::ostream& out) {
  cfg.validate();
  const DetuningSet detunings = carrier_detunings(cfg.target, cfg.system);
  double omega = cfg.schedule.omega_max;
  if (schedule_path) {
    const PulseSchedule sched = load_schedule_checked(cfg, *schedule_path);
    omega = sched.amplitudes.cwiseAbs().maxCoeff();
    out << "peak amplitude from schedule: " << format_double(omega) << "\n";
  }
  if (omega_max) omega = *omega_max;

  const auto orders = sideband_orders(cfg.system, detunings);
  for (std::size_t l = 0; l < orders.size(); ++l) {
    out << "pulse " << l + 1 << ": detuning " << format_double(detunings.deltas[l])
        << ", sideband (" << orders[l][0];
    if (!cfg.system.is_single()) out << ", " << orders[l][1];
    out << "), repump coefficient |A_NN| = ";
    if (cfg.system.is_single()) {
      out << format_double(carrier_leak_coeff(orders[l][0], cfg.system.beta1()));
    } else {
      out << format_double(carrier_leak_coeff(orders[l][0], cfg.system.beta1()) *
                           carrier_leak_coeff(orders[l][1], cfg.system.beta2()));
    }
    out << "\n";
  }

  const OffResonanceReport report = validate_offresonance(omega, cfg.system, detunings, margin);
  out << report.describe(cfg.system) << "\n";
  return report.pass ? 0 : 3;
}

}  // namespace omrl
