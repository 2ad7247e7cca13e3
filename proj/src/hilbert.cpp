#include "omrl/hilbert.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace omrl {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// sqrt(min(n,s)! / max(n,s)!)
double factorial_ratio_sqrt(int n, int s) {
  const int lo = std::min(n, s);
  const int hi = std::max(n, s);
  double prod = 1.0;
  for (int j = lo + 1; j <= hi; ++j) prod *= static_cast<double>(j);
  return 1.0 / std::sqrt(prod);
}

// Matches the detuning gap Delta_1 - Delta_l to integer sideband orders.
std::array<int, 2> match_sideband(const SystemConfig& cfg, double gap, int pulse) {
  const double tol = 1e-9;
  if (cfg.is_single()) {
    const double raw = gap / cfg.omega_m1;
    const int n = static_cast<int>(std::llround(raw));
    require(n >= 0 && std::abs(raw - n) < tol && n < cfg.nm1,
            "detunings: pulse " + std::to_string(pulse) +
                " is not an integer mechanical sideband of the up pulse");
    return {n, 0};
  }
  for (int n1 = 0; n1 < cfg.nm1; ++n1)
    for (int n2 = 0; n2 < cfg.nm2; ++n2)
      if (std::abs(gap - n1 * cfg.omega_m1 - n2 * cfg.omega_m2) < tol) return {n1, n2};
  throw std::invalid_argument("detunings: pulse " + std::to_string(pulse) +
                              " matches no (N_l1, N_l2) sideband within the truncation");
}

}  // namespace

void ModeSpace::validate() const {
  require(dim >= 2, "ModeSpace dim must be >= 2");
}

double SystemConfig::chi_total() const {
  return is_single() ? chi1() : chi1() + chi2();
}

void SystemConfig::validate() const {
  require(omega_m1 > 0, "omega_m1 must be > 0");
  require(g01 >= 0 && std::isfinite(beta1()), "g01 must be >= 0 and finite in units of omega_m1");
  require(kappa >= 0, "kappa must be >= 0");
  require(gamma_m1 >= 0, "gamma_m1 must be >= 0");
  require(n_th1 >= 0, "n_th1 must be >= 0");
  require(nc >= 2, "nc must be >= 2");
  require(nm1 >= 2, "nm1 must be >= 2");
  if (is_single()) {
    require(nm2 == 1, "nm2 must be 1 for single-resonator systems");
  } else {
    require(omega_m2 > 0, "omega_m2 must be > 0");
    require(g02 >= 0 && std::isfinite(beta2()), "g02 must be >= 0 and finite in units of omega_m2");
    require(gamma_m2 >= 0, "gamma_m2 must be >= 0");
    require(n_th2 >= 0, "n_th2 must be >= 0");
    require(nm2 >= 2, "nm2 must be >= 2");
  }
}

Eigen::MatrixXcd annihilation_op(const ModeSpace& space) {
  space.validate();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim, space.dim);
  for (int n = 1; n < space.dim; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return m;
}

Eigen::MatrixXcd displacement_matrix(double beta, const ModeSpace& space) {
  space.validate();
  // beta (b^dag - b) is anti-Hermitian; diagonalize i*K and exponentiate the
  // spectrum, which keeps the result unitary to machine precision.
  const Eigen::MatrixXcd b = annihilation_op(space);
  const Eigen::MatrixXcd k = beta * (b.adjoint() - b);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(kI * k);
  const Eigen::VectorXcd phases =
      (-kI * es.eigenvalues().cast<std::complex<double>>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double laguerre_assoc(int n, int k, double x) {
  require(n >= 0, "laguerre_assoc: n must be >= 0");
  require(k >= -n, "laguerre_assoc: k must be >= -n");
  if (n == 0) return 1.0;
  double lm1 = 1.0;           // L_0^k
  double l = 1.0 + k - x;     // L_1^k
  for (int j = 2; j <= n; ++j) {
    const double lj = ((2.0 * j - 1.0 + k - x) * l - (j - 1.0 + k) * lm1) / j;
    lm1 = l;
    l = lj;
  }
  return l;
}

double displaced_fock_coeff(int m, int n, int s, double beta) {
  require(m >= 1, "displaced_fock_coeff: m must be >= 1");
  require(n >= 0 && s >= 0, "displaced_fock_coeff: n, s must be >= 0");
  const double x = beta * beta;
  const double pre = std::sqrt(static_cast<double>(m)) * std::exp(-x / 2.0) *
                     factorial_ratio_sqrt(n, s);
  if (n < s) return pre * std::pow(beta, s - n) * laguerre_assoc(n, s - n, x);
  return pre * std::pow(-beta, n - s) * laguerre_assoc(s, n - s, x);
}

std::complex<double> displacement_element(int n, int m, std::complex<double> alpha) {
  require(n >= 0 && m >= 0, "displacement_element: n, m must be >= 0");
  const double x = std::norm(alpha);
  const double pre = std::exp(-x / 2.0) * factorial_ratio_sqrt(n, m);
  if (n >= m) return pre * std::pow(alpha, n - m) * laguerre_assoc(m, n - m, x);
  return pre * std::pow(-std::conj(alpha), m - n) * laguerre_assoc(n, m - n, x);
}

double carrier_leak_coeff(int n, double beta) {
  return std::abs(displaced_fock_coeff(1, n, n, beta));
}

double eigenenergy_single(int m, int n, const SystemConfig& cfg) {
  require(cfg.is_single(), "eigenenergy_single needs a single-resonator config");
  return n * cfg.omega_m1 - static_cast<double>(m) * m * cfg.chi1();
}

double eigenenergy_double(int m, int n1, int n2, const SystemConfig& cfg) {
  require(!cfg.is_single(), "eigenenergy_double needs a two-resonator config");
  return n1 * cfg.omega_m1 + n2 * cfg.omega_m2 -
         static_cast<double>(m) * m * (cfg.chi1() + cfg.chi2());
}

DetuningSet carrier_detunings(const TargetSpec& target, const SystemConfig& cfg) {
  target.validate();
  const double up = -cfg.chi_total();
  DetuningSet set;
  set.deltas.push_back(up);
  switch (target.family) {
    case TargetFamily::Fock:
    case TargetFamily::Superposition:
      require(cfg.is_single(), "Fock and superposition targets need a single-resonator system");
      for (int n : target.indices)
        if (n > 0) set.deltas.push_back(up - n * cfg.omega_m1);
      break;
    case TargetFamily::Bell:
      require(!cfg.is_single(), "Bell targets need a two-resonator system");
      if (target.bell == BellState::PhiPlus || target.bell == BellState::PhiMinus) {
        set.deltas.push_back(up - cfg.omega_m1 - cfg.omega_m2);
      } else {
        set.deltas.push_back(up - cfg.omega_m1);
        set.deltas.push_back(up - cfg.omega_m2);
      }
      break;
  }
  return set;
}

std::vector<std::array<int, 2>> sideband_orders(const SystemConfig& cfg,
                                                const DetuningSet& detunings) {
  require(detunings.size() >= 1, "detunings must be non-empty");
  require(std::abs(detunings.deltas[0] + cfg.chi_total()) < 1e-9,
          "detunings: first entry must be the up pulse -chi");
  std::vector<std::array<int, 2>> orders;
  orders.push_back({0, 0});
  for (int l = 1; l < detunings.size(); ++l)
    orders.push_back(match_sideband(cfg, detunings.deltas[0] - detunings.deltas[l], l));
  return orders;
}

OffResonanceReport validate_offresonance(double omega_max, const SystemConfig& cfg,
                                         const DetuningSet& detunings, double margin) {
  require(omega_max >= 0, "omega_max must be >= 0");
  require(margin >= 1, "margin must be >= 1");
  cfg.validate();
  const auto orders = sideband_orders(cfg, detunings);

  OffResonanceReport report;
  report.margin = margin;
  report.omega_max = omega_max;
  report.worst_ratio = std::numeric_limits<double>::infinity();

  auto consider = [&](double delta, double coeff, int pulse, std::array<int, 4> idx) {
    const double denom = std::abs(coeff) * omega_max;
    if (denom == 0.0) return;  // no coupling, nothing to suppress
    const double ratio = std::abs(delta) / denom;
    if (ratio < report.worst_ratio) {
      report.worst_ratio = ratio;
      report.worst_pulse = pulse;
      report.worst_indices = idx;
    }
  };

  if (cfg.is_single()) {
    Eigen::MatrixXd a2(cfg.nm1, cfg.nm1);
    for (int n = 0; n < cfg.nm1; ++n)
      for (int s = 0; s < cfg.nm1; ++s) a2(n, s) = displaced_fock_coeff(2, n, s, cfg.beta1());
    for (std::size_t l = 0; l < orders.size(); ++l)
      for (int n = 0; n < cfg.nm1; ++n)
        for (int s = 0; s < cfg.nm1; ++s) {
          const double delta = (n - s + orders[l][0]) * cfg.omega_m1 - 2.0 * cfg.chi1();
          consider(delta, a2(n, s), static_cast<int>(l), {n, s, -1, -1});
        }
  } else {
    Eigen::MatrixXd d1(cfg.nm1, cfg.nm1), d2(cfg.nm2, cfg.nm2);
    for (int n = 0; n < cfg.nm1; ++n)
      for (int s = 0; s < cfg.nm1; ++s) d1(n, s) = displaced_fock_coeff(1, n, s, cfg.beta1());
    for (int n = 0; n < cfg.nm2; ++n)
      for (int s = 0; s < cfg.nm2; ++s) d2(n, s) = displaced_fock_coeff(1, n, s, cfg.beta2());
    const double chi_sum2 = 2.0 * (cfg.chi1() + cfg.chi2());
    const double sqrt2 = std::sqrt(2.0);
    for (std::size_t l = 0; l < orders.size(); ++l)
      for (int n1 = 0; n1 < cfg.nm1; ++n1)
        for (int n2 = 0; n2 < cfg.nm2; ++n2)
          for (int p1 = 0; p1 < cfg.nm1; ++p1)
            for (int p2 = 0; p2 < cfg.nm2; ++p2) {
              const double delta = (n1 - p1 + orders[l][0]) * cfg.omega_m1 +
                                   (n2 - p2 + orders[l][1]) * cfg.omega_m2 - chi_sum2;
              consider(delta, sqrt2 * d1(n1, p1) * d2(n2, p2), static_cast<int>(l),
                       {n1, n2, p1, p2});
            }
  }
  // strict inequality with a hair of slack so the exact boundary reads as fail
  report.pass = report.worst_ratio > margin * (1.0 + 1e-12);
  return report;
}

std::string OffResonanceReport::describe(const SystemConfig& cfg) const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL") << ": worst |delta|/(|A| omega_max) = " << worst_ratio
     << " vs margin " << margin << " at omega_max = " << omega_max;
  if (worst_pulse >= 0) {
    os << " (pulse " << worst_pulse + 1;
    if (cfg.is_single())
      os << ", n=" << worst_indices[0] << ", s=" << worst_indices[1];
    else
      os << ", n1=" << worst_indices[0] << ", n2=" << worst_indices[1]
         << ", n1'=" << worst_indices[2] << ", n2'=" << worst_indices[3];
    os << ")";
  }
  return os.str();
}

Eigen::MatrixXcd build_effective_hamiltonian(const SystemConfig& cfg,
                                             const DetuningSet& detunings,
                                             const std::vector<double>& amplitudes) {
  require(static_cast<int>(amplitudes.size()) == detunings.size(),
          "amplitudes length must equal the number of detunings");
  const auto orders = sideband_orders(cfg, detunings);
  const int mech = cfg.mech_dim();
  Eigen::MatrixXcd up = Eigen::MatrixXcd::Zero(2 * mech, 2 * mech);

  if (cfg.is_single()) {
    for (std::size_t l = 0; l < orders.size(); ++l) {
      const int nl = orders[l][0];
      for (int n = 0; n + nl < cfg.nm1; ++n)
        up(mech + n, n + nl) += amplitudes[l] * displaced_fock_coeff(1, n, n + nl, cfg.beta1());
    }
  } else {
    for (std::size_t l = 0; l < orders.size(); ++l) {
      const int nl1 = orders[l][0];
      const int nl2 = orders[l][1];
      for (int n1 = 0; n1 + nl1 < cfg.nm1; ++n1)
        for (int n2 = 0; n2 + nl2 < cfg.nm2; ++n2) {
          const double coeff = displaced_fock_coeff(1, n1, n1 + nl1, cfg.beta1()) *
                               displaced_fock_coeff(1, n2, n2 + nl2, cfg.beta2());
          up(mech + n1 * cfg.nm2 + n2, (n1 + nl1) * cfg.nm2 + (n2 + nl2)) +=
              amplitudes[l] * coeff;
        }
    }
  }
  return up + up.adjoint();
}

}  // namespace omrl
