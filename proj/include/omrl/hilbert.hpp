#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "omrl/target_spec.hpp"

namespace omrl {

// Fock-space truncation for one bosonic mode, states |0> .. |dim-1>.
struct ModeSpace {
  int dim = 2;

  void validate() const;
};

enum class SystemKind { Single, Double };

// Physical and truncation parameters of a single- or two-resonator
// optomechanical system. All frequencies and rates are in units of the
// reference frequency (the mechanical frequency of mode 1); time is in units
// of its inverse. Mode-2 fields are ignored when kind == Single.
struct SystemConfig {
  SystemKind kind = SystemKind::Single;
  double omega_m1 = 1.0;
  double omega_m2 = 1.0;
  double g01 = 0.0;
  double g02 = 0.0;
  double kappa = 0.0;
  double gamma_m1 = 0.0;
  double gamma_m2 = 0.0;
  double n_th1 = 0.0;
  double n_th2 = 0.0;
  int nc = 2;
  int nm1 = 2;
  int nm2 = 1;

  double beta1() const { return g01 / omega_m1; }
  double beta2() const { return g02 / omega_m2; }
  double chi1() const { return g01 * g01 / omega_m1; }
  double chi2() const { return g02 * g02 / omega_m2; }
  // Kerr-like shift entering the first carrier detuning: chi (single) or
  // chi1 + chi2 (double).
  double chi_total() const;

  bool is_single() const { return kind == SystemKind::Single; }
  int mech_dim() const { return is_single() ? nm1 : nm1 * nm2; }
  int dim() const { return nc * mech_dim(); }

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Ordered carrier detunings Delta_l (units of the reference frequency), one
// per pulsed drive. The first entry is always the "up" pulse -chi_total.
struct DetuningSet {
  std::vector<double> deltas;

  int size() const { return static_cast<int>(deltas.size()); }
};

// Truncated annihilation operator: M[n-1, n] = sqrt(n).
Eigen::MatrixXcd annihilation_op(const ModeSpace& space);

// exp[beta (b^dag - b)] on the truncated space. Unitary up to truncation
// error; the caller picks dim large enough for the columns it uses.
Eigen::MatrixXcd displacement_matrix(double beta, const ModeSpace& space);

// Associated Laguerre polynomial L_n^k(x), three-term recurrence in n.
double laguerre_assoc(int n, int k, double x);

// Displaced-Fock transition coefficient
//   A_{n,s}^{(m)} = sqrt(m) <n| exp[-beta (b^dag - b)] |s>
// in closed form (Laguerre polynomials), branching on n < s vs n >= s.
double displaced_fock_coeff(int m, int n, int s, double beta);

// <n| exp(alpha b^dag - conj(alpha) b) |m> for complex alpha, closed form.
// Exact for any alpha regardless of the surrounding truncation.
std::complex<double> displacement_element(int n, int m, std::complex<double> alpha);

// |A_{N,N}^{(1)}(beta)|: the repump matrix element a well-chosen coupling
// should drive close to zero for the addressed Fock index.
double carrier_leak_coeff(int n, double beta);

double eigenenergy_single(int m, int n, const SystemConfig& cfg);
double eigenenergy_double(int m, int n1, int n2, const SystemConfig& cfg);

// Carrier detunings addressing the transitions needed for a target family:
//   Fock N            -> (-chi, -chi - N w_M)
//   superposition {Ni} -> (-chi, -chi - Ni w_M ...) for each nonzero Ni
//   Phi+/-            -> (-chi1-chi2, -chi1-chi2 - w_M1 - w_M2)
//   Psi+/-            -> (-chi1-chi2, -chi1-chi2 - w_M1, -chi1-chi2 - w_M2)
DetuningSet carrier_detunings(const TargetSpec& target, const SystemConfig& cfg);

// Sideband orders (N_l1, N_l2) recovered from a detuning set; N_l2 = 0 for
// single-resonator systems, and the first pulse is always (0, 0).
std::vector<std::array<int, 2>> sideband_orders(const SystemConfig& cfg,
                                                const DetuningSet& detunings);

struct OffResonanceReport {
  bool pass = false;
  double margin = 0.0;
  double omega_max = 0.0;
  // min over two-photon transitions of |delta| / (|A| omega_max)
  double worst_ratio = 0.0;
  int worst_pulse = -1;
  // (n, s) for single systems, (n1, n2, n1', n2') for double
  std::array<int, 4> worst_indices{-1, -1, -1, -1};

  std::string describe(const SystemConfig& cfg) const;
};

// Checks the one- to two-photon leakage condition
//   |delta| > margin * |A^{(2)}| * omega_max
// for every transition within the truncation and every pulse.
OffResonanceReport validate_offresonance(double omega_max, const SystemConfig& cfg,
                                         const DetuningSet& detunings, double margin = 10.0);

// Resonant-transition Hamiltonian in the dressed basis, restricted to the
// zero- and one-photon blocks: rows/cols 0..M-1 are |0, n>, rows/cols M..2M-1
// are |1, displaced n>, with M the mechanical dimension. Amplitudes are held
// constant; used for cross-validation against the full dynamics.
Eigen::MatrixXcd build_effective_hamiltonian(const SystemConfig& cfg,
                                             const DetuningSet& detunings,
                                             const std::vector<double>& amplitudes);

}  // namespace omrl
