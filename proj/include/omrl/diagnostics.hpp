#pragma once

#include <vector>

#include <Eigen/Dense>

#include "omrl/hilbert.hpp"

namespace omrl {

// <psi| rho |psi> for a pure target; real up to numerical residue.
double fidelity(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& psi);

// Convenience overload resolving the target on the mechanical space of cfg.
double fidelity(const Eigen::MatrixXcd& rho_mech, const TargetSpec& target,
                const SystemConfig& cfg);

// Reduced state over the kept subsystems (ascending factor indices, dims
// listed slowest first, matching the joint basis ordering).
Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, const std::vector<int>& dims,
                               const std::vector<int>& keep);

// Fast path: trace out the cavity factor of a joint state.
Eigen::MatrixXcd reduced_mech(const Eigen::MatrixXcd& rho, const SystemConfig& cfg);

struct WignerGrid {
  Eigen::VectorXd re_axis;
  Eigen::VectorXd im_axis;
  Eigen::MatrixXd values;  // values(i, j) = W(re_axis(i) + i im_axis(j))
};

// Displaced-parity Wigner function of a single-mode state, evaluated from
// the exact displacement-operator matrix elements on the state's support.
WignerGrid wigner(const Eigen::MatrixXcd& rho_b, double re_min = -4.0, double re_max = 4.0,
                  int re_pts = 81, double im_min = -4.0, double im_max = 4.0, int im_pts = 81);

// Elementwise |rho_nm| in the Fock representation.
Eigen::MatrixXd fock_matrix_map(const Eigen::MatrixXcd& rho);

// Transpose of the chosen mode's indices of a two-mode state with factor
// dims (d1, d2), mode 2 fastest.
Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& rho, int d1, int d2, int mode = 2);

// log2 of the trace norm of the partial transpose; zero for separable states.
double log_negativity(const Eigen::MatrixXcd& rho_b1b2, int d1, int d2);

}  // namespace omrl
