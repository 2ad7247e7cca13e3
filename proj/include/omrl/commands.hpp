#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "omrl/config.hpp"

namespace omrl {

inline constexpr const char* kVersion = "0.1.0";

struct TrainArtifacts {
  std::string training_log;
  std::string fidelity_curve;
  std::string best_schedule;
  std::string manifest;
  std::vector<std::string> checkpoints;
  double best_fidelity = 0.0;
  int best_epoch = -1;
  double wall_seconds = 0.0;
};

// Full training run; writes training_log.csv, fidelity_curve.csv,
// best_schedule.csv, checkpoints, and manifest.ini under cfg.output.dir.
TrainArtifacts cmd_train(const ExperimentConfig& cfg, std::ostream& out);

struct EvaluateArtifacts {
  std::string fidelity_trace;
  std::string wigner_csv;      // single-resonator systems
  std::string fock_map;
  std::string negativity_trace;  // two-resonator systems
  std::string schedule_csv;      // written when rolling out a checkpoint
  double final_fidelity = 0.0;
  double final_log_negativity = 0.0;
};

// Noise-free replay of a stored schedule, or a deterministic rollout of a
// checkpointed policy. Exactly one of schedule_path/checkpoint_path is set.
EvaluateArtifacts cmd_evaluate(const ExperimentConfig& cfg,
                               const std::optional<std::string>& schedule_path,
                               const std::optional<std::string>& checkpoint_path,
                               std::ostream& out);

// Trains once per parameter value with a shared seed and collects the best
// fidelities into sweep.csv. Parameter is one of kappa, gamma_m, n_th.
std::string cmd_sweep(const ExperimentConfig& cfg, const std::string& parameter,
                      const std::vector<double>& values, std::ostream& out);

// Wigner grid of the ideal target (no schedule) or of the evolved final
// mechanical state (with a schedule).
std::string cmd_wigner(const ExperimentConfig& cfg,
                       const std::optional<std::string>& schedule_path, std::ostream& out);

// Off-resonance validation of the configured drive; omega defaults to the
// schedule bound, or to the peak amplitude of a stored schedule.
int cmd_validate(const ExperimentConfig& cfg, const std::optional<std::string>& schedule_path,
                 std::optional<double> omega_max, double margin, std::ostream& out);

}  // namespace omrl
