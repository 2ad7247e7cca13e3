#include "omrl/control.hpp"

#include <cmath>
#include <stdexcept>

#include "omrl/diagnostics.hpp"

namespace omrl {

Eigen::VectorXd vectorize_state(const Eigen::MatrixXcd& rho) {
  const int d = static_cast<int>(rho.rows());
  Eigen::VectorXd v(2 * d * d);
  // row-major flattening = column-major walk of the transpose
  v.head(d * d) = rho.real().transpose().reshaped();
  v.tail(d * d) = rho.imag().transpose().reshaped();
  return v;
}

Eigen::MatrixXcd devectorize_state(const Eigen::VectorXd& v) {
  const int d = static_cast<int>(std::llround(std::sqrt(v.size() / 2.0)));
  if (2 * d * d != v.size())
    throw std::invalid_argument("devectorize_state: length is not 2 D^2");
  Eigen::MatrixXcd rho(d, d);
  rho.real() = v.head(d * d).reshaped(d, d).transpose();
  rho.imag() = v.tail(d * d).reshaped(d, d).transpose();
  return rho;
}

double fidelity_reward(double fidelity) {
  const double f = std::min(std::max(fidelity, 0.0), 1.0 - 1e-12);
  return -10.0 * std::log10(1.0 - f);
}

Environment::Environment(const SystemConfig& cfg, const TargetSpec& target,
                         const ScheduleGrid& grid, FidelityMode mode)
    : target_(target), grid_(grid), mode_(mode), model_(cfg) {
  if (grid_.steps < 1) throw std::invalid_argument("schedule steps must be >= 1");
  if (!(grid_.total_time > 0)) throw std::invalid_argument("schedule total_time must be > 0");
  if (!(grid_.omega_max > 0)) throw std::invalid_argument("omega_max must be > 0");

  schedule_.detunings = carrier_detunings(target_, cfg);
  schedule_.total_time = grid_.total_time;
  schedule_.amplitudes = Eigen::MatrixXd::Zero(grid_.steps, schedule_.detunings.size());

  target_mech_ = target_.mech_vector(cfg.nm1, cfg.nm2);
  target_joint_ = Eigen::VectorXcd::Zero(model_.dim());
  target_joint_.head(cfg.mech_dim()) = target_mech_;  // cavity vacuum block

  rho_ = vacuum_density(cfg);
}

Eigen::VectorXd Environment::reset() {
  rho_ = vacuum_density(model_.config());
  schedule_.amplitudes.setZero();
  current_step_ = 0;
  return vectorize_state(rho_);
}

double Environment::fidelity_now() const {
  if (mode_ == FidelityMode::JointProjected) return fidelity(rho_, target_joint_);
  return fidelity(reduced_mech(rho_, model_.config()), target_mech_);
}

Environment::StepResult Environment::step(const Eigen::VectorXd& action) {
  if (done()) throw std::logic_error("env step called after the episode finished");
  if (action.size() != action_dim())
    throw std::invalid_argument("action length must match the pulse count");

  schedule_.amplitudes.row(current_step_) =
      action.cwiseMax(-grid_.omega_max).cwiseMin(grid_.omega_max).transpose();
  rho_ = model_.evolve_step(rho_, current_step_, schedule_);
  ++current_step_;

  StepResult result;
  result.obs = vectorize_state(rho_);
  result.reward = fidelity_reward(fidelity_now());
  result.done = done();
  return result;
}

}  // namespace omrl
