#pragma once

#include <Eigen/Dense>

#include "omrl/dynamics.hpp"
#include "omrl/hilbert.hpp"

namespace omrl {

// How the training fidelity reads the joint state: against the reduced
// mechanical state (default), or against |0>_cav tensor the target.
enum class FidelityMode { Reduced, JointProjected };

struct ScheduleGrid {
  double total_time = 50.0;
  int steps = 50;
  double omega_max = 0.2;
};

// Flatten to 2 D^2 reals: all real parts row-major, then all imaginary parts.
Eigen::VectorXd vectorize_state(const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd devectorize_state(const Eigen::VectorXd& v);

// Dense per-step reward -10 log10(1 - F), with F clamped to [0, 1 - 1e-12].
double fidelity_reward(double fidelity);

// Episodic environment: the driven dissipative optomechanical system under a
// piecewise-constant pulse schedule, rewarded by fidelity to a target state.
class Environment {
 public:
  Environment(const SystemConfig& cfg, const TargetSpec& target, const ScheduleGrid& grid,
              FidelityMode mode = FidelityMode::Reduced);

  int obs_dim() const { return 2 * model_.dim() * model_.dim(); }
  int action_dim() const { return schedule_.pulses(); }
  double omega_max() const { return grid_.omega_max; }
  int steps() const { return grid_.steps; }
  const DetuningSet& detunings() const { return schedule_.detunings; }
  const LindbladModel& model() const { return model_; }
  const SystemConfig& config() const { return model_.config(); }
  const TargetSpec& target() const { return target_; }

  Eigen::VectorXd reset();

  struct StepResult {
    Eigen::VectorXd obs;
    double reward = 0.0;
    bool done = false;
  };
  // Applies the (clamped) action as this step's amplitudes and advances one
  // control interval. Throws when called on a finished episode.
  StepResult step(const Eigen::VectorXd& action);

  bool done() const { return current_step_ >= grid_.steps; }
  int current_step() const { return current_step_; }
  const Eigen::MatrixXcd& state() const { return rho_; }
  double fidelity_now() const;

  // Amplitudes executed so far (rows beyond the current step are zero).
  const PulseSchedule& executed_schedule() const { return schedule_; }

 private:
  TargetSpec target_;
  ScheduleGrid grid_;
  FidelityMode mode_;
  LindbladModel model_;
  PulseSchedule schedule_;
  Eigen::VectorXcd target_mech_;
  Eigen::VectorXcd target_joint_;
  Eigen::MatrixXcd rho_;
  int current_step_ = 0;
};

}  // namespace omrl
