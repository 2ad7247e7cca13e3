// Acceptance suite: one line per criterion, nonzero exit when a gating
// criterion fails. Groups: core (fast physics and plumbing), training-fock2 /
// training-sup02 (full desk-scale reproductions), extended (long-budget runs
// excluded from the default gate).
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "omrl/commands.hpp"
#include "omrl/diagnostics.hpp"
#include "omrl/io.hpp"

using namespace omrl;
namespace fs = std::filesystem;

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

int g_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << "  " << name << "  [" << detail << "]\n"
            << std::flush;
  if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------------------
// core criteria

void coefficient_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> pick_m(1, 2), pick_ns(0, 12);
  std::uniform_real_distribution<double> pick_beta(0.0, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = pick_m(rng), n = pick_ns(rng), s = pick_ns(rng);
    const double beta = pick_beta(rng);
    const Eigen::MatrixXcd d = displacement_matrix(-beta, {n + s + 30});
    const double oracle = std::sqrt(static_cast<double>(m)) * d(n, s).real();
    worst = std::max(worst, std::abs(displaced_fock_coeff(m, n, s, beta) - oracle));
  }
  const double elapsed = seconds_since(t0);
  report("coefficient oracle: 200 random tuples vs matrix exponential",
         worst < 1e-8 && elapsed < 10.0,
         "max |diff| = " + fmt(worst) + ", " + fmt(elapsed) + " s");
}

void conservation_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = preset_config("fock2");
  const LindbladModel model(cfg.system);
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> amp(-cfg.schedule.omega_max, cfg.schedule.omega_max);

  double worst_trace = 0.0, worst_herm = 0.0, worst_eig = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    PulseSchedule sched;
    sched.detunings = carrier_detunings(cfg.target, cfg.system);
    sched.total_time = cfg.schedule.total_time;
    sched.amplitudes.resize(cfg.schedule.steps, sched.detunings.size());
    for (int i = 0; i < sched.amplitudes.size(); ++i) sched.amplitudes.data()[i] = amp(rng);
    const auto traj = model.evolve_episode(vacuum_density(cfg.system), sched, true);
    for (const auto& rho : traj) {
      worst_trace = std::max(worst_trace, trace_error(rho));
      worst_herm = std::max(worst_herm, hermiticity_error(rho));
      worst_eig = std::min(worst_eig, min_eigenvalue(rho));
    }
  }
  const double elapsed = seconds_since(t0);
  report("conservation: 20 random bounded fock2 episodes",
         worst_trace < 1e-6 && worst_herm < 1e-10 && worst_eig >= -1e-7 && elapsed < 120.0,
         "trace " + fmt(worst_trace) + ", herm " + fmt(worst_herm) + ", min_eig " +
             fmt(worst_eig) + ", " + fmt(elapsed) + " s");
}

void analytic_decay() {
  // bare cavity decay against exp(-kappa t) at 50 checkpoints
  SystemConfig cfg;
  cfg.kind = SystemKind::Single;
  cfg.g01 = 0.0;
  cfg.kappa = 0.02;
  cfg.nc = 3;
  cfg.nm1 = 4;
  const LindbladModel model(cfg);
  PulseSchedule sched;
  sched.detunings.deltas = {0.0};
  sched.amplitudes = Eigen::MatrixXd::Zero(50, 1);
  sched.total_time = 50.0;

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(cfg.dim(), cfg.dim());
  rho(joint_index(cfg, 1, 0), joint_index(cfg, 1, 0)) = 1.0;
  const auto traj = model.evolve_episode(rho, sched, true);
  double worst_rel = 0.0;
  for (int s = 1; s <= 50; ++s) {
    const double pop = traj[s](joint_index(cfg, 1, 0), joint_index(cfg, 1, 0)).real();
    const double expected = std::exp(-cfg.kappa * s * sched.dt());
    worst_rel = std::max(worst_rel, std::abs(pop - expected) / expected);
  }
  report("analytic decay: cavity population vs exp(-kappa t)", worst_rel < 1e-6,
         "max rel err = " + fmt(worst_rel) + " over 50 checkpoints");

  // thermal relaxation of the mechanical mode toward n_th = 0.5
  SystemConfig th;
  th.kind = SystemKind::Single;
  th.g01 = 0.0;
  th.gamma_m1 = 0.01;
  th.n_th1 = 0.5;
  th.nc = 2;
  th.nm1 = 15;
  const LindbladModel tmodel(th);
  PulseSchedule tsched;
  tsched.detunings.deltas = {0.0};
  const double horizon = 10.0 / th.gamma_m1;
  tsched.amplitudes = Eigen::MatrixXd::Zero(400, 1);
  tsched.total_time = horizon;
  const auto ttraj = tmodel.evolve_episode(vacuum_density(th), tsched, false);
  const double occ = (tmodel.mech_number_op() * ttraj.back()).trace().real();
  report("analytic decay: thermal relaxation to n_th", std::abs(occ - th.n_th1) < 1e-3,
         "<b^dag b> = " + fmt(occ) + " vs 0.5 at gamma t = 10");
}

void effective_model_equivalence() {
  ExperimentConfig cfg = preset_config("fock2");
  cfg.system.kappa = 0.0;
  cfg.system.gamma_m1 = 0.0;
  const LindbladModel model(cfg.system);

  const double omega = 0.04;
  const DetuningSet up{{-cfg.system.chi1()}};
  if (!validate_offresonance(omega, cfg.system, up, 10.0).pass) {
    report("effective model: drive satisfies the margin-10 condition", false, "precondition");
    return;
  }

  const int steps = 40;
  PulseSchedule sched;
  sched.detunings = up;
  sched.amplitudes = Eigen::MatrixXd::Constant(steps, 1, omega);
  sched.total_time = 20.0;

  const Eigen::MatrixXcd disp = displacement_matrix(cfg.system.beta1(), {cfg.system.nm1});
  Eigen::VectorXcd excited = Eigen::VectorXcd::Zero(cfg.system.dim());
  excited.segment(joint_index(cfg.system, 1, 0), cfg.system.nm1) = disp.col(0);
  Eigen::VectorXcd ground = Eigen::VectorXcd::Zero(cfg.system.dim());
  ground(joint_index(cfg.system, 0, 0)) = 1.0;

  const Eigen::MatrixXcd heff = build_effective_hamiltonian(cfg.system, up, {omega});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(heff);
  Eigen::VectorXcd eff0 = Eigen::VectorXcd::Zero(2 * cfg.system.nm1);
  eff0(0) = 1.0;

  const auto traj = model.evolve_episode(vacuum_density(cfg.system), sched, true);
  double worst = 0.0;
  for (int s = 0; s <= steps; ++s) {
    const double t = s * sched.dt();
    const Eigen::VectorXcd phases = (-kI * t * es.eigenvalues().array()).exp().matrix();
    const Eigen::VectorXcd eff =
        es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * eff0;
    worst = std::max(worst, std::abs(ground.dot(traj[s] * ground).real() - std::norm(eff(0))));
    worst = std::max(worst,
                     std::abs(excited.dot(traj[s] * excited).real() -
                              std::norm(eff(cfg.system.nm1))));
  }
  report("effective model: two-level transfer matches full dynamics", worst < 0.05,
         "max |population diff| = " + fmt(worst) + " over omega_M t <= 20");
}

void diagnostics_exact_values() {
  Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(8, 8);
  vac(0, 0) = 1.0;
  Eigen::MatrixXcd one = Eigen::MatrixXcd::Zero(8, 8);
  one(1, 1) = 1.0;
  const double w_vac = wigner(vac, 0.0, 0.0, 1, 0.0, 0.0, 1).values(0, 0);
  const double w_one = wigner(one, 0.0, 0.0, 1, 0.0, 0.0, 1).values(0, 0);
  const bool wigner_ok =
      std::abs(w_vac - 2.0 / M_PI) < 1e-9 && std::abs(w_one + 2.0 / M_PI) < 1e-9;

  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const double neg = log_negativity(phi * phi.adjoint(), 2, 2);
  const bool neg_ok = std::abs(neg - 1.0) < 1e-10;

  std::mt19937_64 rng(5);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXcd psi(5);
  for (int i = 0; i < 5; ++i) psi(i) = std::complex<double>(dist(rng), dist(rng));
  psi /= psi.norm();
  const double mixed = fidelity(Eigen::MatrixXcd::Identity(5, 5) / 5.0, psi);
  const bool mixed_ok = std::abs(mixed - 0.2) < 1e-12;

  report("diagnostics: W(0) values, Phi+ negativity, mixed-state fidelity",
         wigner_ok && neg_ok && mixed_ok,
         "W_vac " + fmt(w_vac) + ", W_one " + fmt(w_one) + ", N " + fmt(neg) + ", F " +
             fmt(mixed));
}

void gradient_check() {
  Mlp<double> critic({6, 32, 32, 1}, {Activation::ReLU, Activation::ReLU, Activation::Linear});
  std::mt19937_64 rng(9);
  critic.init_uniform(rng);

  std::normal_distribution<double> dist(0.0, 0.7);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd input(6);
    for (int i = 0; i < 6; ++i) input(i) = dist(rng);
    critic.forward_cached(input);
    const Eigen::MatrixXd grad = critic.backward(Eigen::MatrixXd::Ones(1, 1), false);
    const double h = 1e-6;
    for (int a = 4; a < 6; ++a) {  // action block of the concatenated input
      Eigen::VectorXd up = input, down = input;
      up(a) += h;
      down(a) -= h;
      const double fd = (critic.forward(up)(0, 0) - critic.forward(down)(0, 0)) / (2.0 * h);
      worst = std::max(worst, std::abs(grad(a, 0) - fd) / std::max(std::abs(fd), 1e-10));
    }
  }
  report("gradient check: critic action gradients vs central differences (2x32)",
         worst < 1e-4, "max rel err = " + fmt(worst));
}

void determinism() {
  ExperimentConfig cfg = preset_config("fock2");
  cfg.schedule.steps = 10;
  cfg.schedule.total_time = 10.0;
  cfg.rl.epochs = 4;
  cfg.rl.warmup_epochs = 2;
  cfg.rl.batch_size = 16;
  cfg.rl.hidden1 = cfg.rl.hidden2 = 32;
  cfg.rl.checkpoint_every = 0;

  const fs::path base = fs::temp_directory_path() / "omrl_acceptance_det";
  fs::remove_all(base);
  std::ostringstream sink;
  cfg.output.dir = (base / "a").string();
  const TrainArtifacts a = cmd_train(cfg, sink);
  cfg.output.dir = (base / "b").string();
  const TrainArtifacts b = cmd_train(cfg, sink);
  const bool same_log = read_text_file(a.training_log) == read_text_file(b.training_log);
  const bool same_sched = read_text_file(a.best_schedule) == read_text_file(b.best_schedule);
  fs::remove_all(base);
  report("determinism: identical config and seed give byte-identical logs",
         same_log && same_sched,
         std::string("training_log ") + (same_log ? "identical" : "differs") +
             ", best_schedule " + (same_sched ? "identical" : "differs"));
}

// ---------------------------------------------------------------------------
// training reproductions

void training_reproduction(const std::string& preset, double threshold,
                           const std::vector<std::uint64_t>& seeds) {
  const auto t0 = std::chrono::steady_clock::now();
  double best = 0.0;
  std::uint64_t best_seed = seeds.front();
  bool reached = false;
  PulseSchedule best_schedule;
  for (const auto seed : seeds) {
    ExperimentConfig cfg = preset_config(preset);
    cfg.rl.seed = seed;
    cfg.rl.stop_fidelity = threshold;  // stop as soon as the bar is cleared
    cfg.rl.checkpoint_every = 0;
    Environment env(cfg.system, cfg.target, cfg.grid(), cfg.schedule.fidelity_mode);
    const TrainingReport r =
        train(env, cfg.rl, "", [&](int epoch, const TrainingReport& rep) {
          if ((epoch + 1) % 100 == 0)
            std::cout << "  " << preset << " seed " << seed << " epoch " << epoch + 1 << ": best "
                      << fmt(rep.best_fidelity_value) << "\n"
                      << std::flush;
        });
    std::cout << "  " << preset << " seed " << seed << ": best " << fmt(r.best_fidelity_value)
              << " at epoch " << r.best_epoch + 1 << " (" << r.epochs_run << " epochs, "
              << fmt(r.wall_seconds) << " s)\n"
              << std::flush;
    if (r.best_fidelity_value > best) {
      best = r.best_fidelity_value;
      best_seed = seed;
      best_schedule = r.best_schedule;
    }
    if (r.best_fidelity_value >= threshold) {
      reached = true;
      break;
    }
  }
  report("training: " + preset + " reaches fidelity >= " + fmt(threshold) +
             " on one of the fixed seeds",
         reached,
         "best " + fmt(best) + " (seed " + std::to_string(best_seed) + "), " +
             fmt(seconds_since(t0)) + " s");

  // two-mode runs also report the entanglement the best schedule produces
  const ExperimentConfig cfg = preset_config(preset);
  if (!cfg.system.is_single() && best_schedule.steps() > 0) {
    const LindbladModel model(cfg.system);
    const auto traj = model.evolve_episode(vacuum_density(cfg.system), best_schedule, false);
    const double neg = log_negativity(reduced_mech(traj.back(), cfg.system), cfg.system.nm1,
                                      cfg.system.nm2);
    std::cout << "  " << preset << " final log negativity: " << fmt(neg) << "\n" << std::flush;
  }
}

// ---------------------------------------------------------------------------
// extended (non-gating) criteria

void dissipation_trend() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> kappas = {0.002, 0.01, 0.02};
  const std::vector<std::uint64_t> seeds = {0, 1, 2};
  std::vector<double> mean_fidelity;
  for (double kappa : kappas) {
    double acc = 0.0;
    for (const auto seed : seeds) {
      ExperimentConfig cfg = preset_config("fock2");
      cfg.system.kappa = kappa;
      cfg.rl.seed = seed;
      cfg.rl.checkpoint_every = 0;
      Environment env(cfg.system, cfg.target, cfg.grid(), cfg.schedule.fidelity_mode);
      const TrainingReport r = train(env, cfg.rl);
      acc += r.best_fidelity_value;
      std::cout << "  kappa " << fmt(kappa) << " seed " << seed << ": best "
                << fmt(r.best_fidelity_value) << "\n"
                << std::flush;
    }
    mean_fidelity.push_back(acc / seeds.size());
  }
  const bool monotone =
      mean_fidelity[0] >= mean_fidelity[1] && mean_fidelity[1] >= mean_fidelity[2];
  std::ostringstream detail;
  for (std::size_t i = 0; i < kappas.size(); ++i)
    detail << (i ? ", " : "") << fmt(kappas[i]) << " -> " << fmt(mean_fidelity[i]);
  detail << ", " << fmt(seconds_since(t0)) << " s";
  report("dissipation trend: mean best fidelity non-increasing in kappa", monotone,
         detail.str());
}

}  // namespace

int main(int argc, char** argv) {
  const std::string group = argc > 1 ? argv[1] : "core";
  std::cout << "acceptance group: " << group << "\n";

  if (group == "core") {
    coefficient_oracle();
    conservation_suite();
    analytic_decay();
    effective_model_equivalence();
    diagnostics_exact_values();
    gradient_check();
    determinism();
  } else if (group == "training-fock2") {
    training_reproduction("fock2", 0.90, {0, 1, 2});
  } else if (group == "training-sup02") {
    training_reproduction("sup02", 0.90, {0, 1, 2});
  } else if (group == "extended") {
    training_reproduction("fock6", 0.70, {0, 1, 2});
    training_reproduction("sup06", 0.85, {0, 1, 2});
    training_reproduction("bell_phi_plus", 0.75, {0, 1, 2});
    dissipation_trend();
  } else {
    std::cerr << "unknown group " << group
              << " (use core, training-fock2, training-sup02, extended)\n";
    return 2;
  }

  std::cout << (g_failures == 0 ? "ALL PASS" : "FAILURES: " + std::to_string(g_failures))
            << "\n";
  return g_failures == 0 ? 0 : 1;
}
