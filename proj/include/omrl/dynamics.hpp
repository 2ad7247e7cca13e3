#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "omrl/hilbert.hpp"

namespace omrl {

// Carrier detunings plus piecewise-constant drive amplitudes on a uniform
// time grid. amplitudes(s, l) applies on [s dt, (s+1) dt) while the carrier
// phase exp(-i Delta_l t) keeps running continuously.
struct PulseSchedule {
  DetuningSet detunings;
  Eigen::MatrixXd amplitudes;  // steps x pulses
  double total_time = 0.0;

  int steps() const { return static_cast<int>(amplitudes.rows()); }
  int pulses() const { return static_cast<int>(amplitudes.cols()); }
  double dt() const { return total_time / steps(); }

  // Throws std::invalid_argument when shapes or bounds are inconsistent.
  void validate(double omega_max) const;
};

// Basis index of |m, n1(, n2)> with the cavity index slowest, then mode 1,
// then mode 2.
int joint_index(const SystemConfig& cfg, int m, int n1, int n2 = 0);

Eigen::MatrixXcd vacuum_density(const SystemConfig& cfg);

double trace_error(const Eigen::MatrixXcd& rho);
double hermiticity_error(const Eigen::MatrixXcd& rho);
double min_eigenvalue(const Eigen::MatrixXcd& rho);
double purity(const Eigen::MatrixXcd& rho);

// D[o]rho = (2 o rho o^dag - rho o^dag o - o^dag o rho) / 2
Eigen::MatrixXcd lindblad_dissipator(const Eigen::MatrixXcd& o, const Eigen::MatrixXcd& rho);

// Dressed master equation of a driven optomechanical system on the truncated
// joint space. Constant operators are assembled once per configuration; the
// drive enters through scalar carrier phases only.
class LindbladModel {
 public:
  explicit LindbladModel(const SystemConfig& cfg);

  const SystemConfig& config() const { return cfg_; }
  int dim() const { return cfg_.dim(); }

  // Rotating-frame Hamiltonian at absolute time t (drive amplitudes from the
  // step containing t, carrier phases from t itself).
  Eigen::MatrixXcd hamiltonian_at(double t, const PulseSchedule& sched) const;

  Eigen::MatrixXcd master_rhs(const Eigen::MatrixXcd& rho, double t,
                              const PulseSchedule& sched) const;

  // Advances one control step with fixed-step RK4 substepping and
  // re-symmetrizes; the trace is left untouched so drift stays measurable.
  Eigen::MatrixXcd evolve_step(const Eigen::MatrixXcd& rho, int step,
                               const PulseSchedule& sched) const;

  // All S+1 states when recording, otherwise just the final state.
  std::vector<Eigen::MatrixXcd> evolve_episode(const Eigen::MatrixXcd& rho0,
                                               const PulseSchedule& sched, bool record) const;

  // Substeps per control step: the fastest retained frequency resolved to
  // a phase advance of at most 0.05 rad per substep.
  int substeps_per_step(const PulseSchedule& sched) const;

  Eigen::MatrixXcd drift_hamiltonian() const { return Eigen::MatrixXcd(h0_); }
  Eigen::MatrixXcd cavity_op() const { return Eigen::MatrixXcd(a_); }
  Eigen::MatrixXcd cavity_number_op() const;
  Eigen::MatrixXcd mech_number_op(int mode = 1) const;

 private:
  using SpMat = Eigen::SparseMatrix<std::complex<double>>;

  struct Workspace {
    Eigen::MatrixXcd k1, k2, k3, k4, stage, tmp, jrho;
  };

  void rhs_into(Eigen::MatrixXcd& out, const Eigen::MatrixXcd& rho, double t,
                const Eigen::VectorXd& amps, const DetuningSet& detunings,
                Eigen::MatrixXcd& jrho) const;
  void step_inplace(Eigen::MatrixXcd& rho, int step, const PulseSchedule& sched,
                    Workspace& ws) const;

  SystemConfig cfg_;
  SpMat a_, adag_;                    // cavity ladder on the joint space
  SpMat h0_;                          // undriven rotating-frame Hamiltonian
  SpMat damp_, damp_adj_;             // i H0 + (1/2) sum_k J_k^dag J_k, and its adjoint
  std::vector<SpMat> jumps_, jumps_adj_;  // sqrt(rate)-scaled jump operators
};

}  // namespace omrl
