#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "omrl/hilbert.hpp"

using namespace omrl;

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
  return r;
}

// term-by-term series, independent of the recurrence
double laguerre_series(int n, int k, double x) {
  double sum = 0.0;
  double fact = 1.0;
  for (int i = 0; i <= n; ++i) {
    if (i > 0) fact *= i;
    sum += ((i % 2 == 0) ? 1.0 : -1.0) * binomial(n + k, n - i) * std::pow(x, i) / fact;
  }
  return sum;
}

double coeff_oracle(int m, int n, int s, double beta) {
  const ModeSpace space{n + s + 30};
  const Eigen::MatrixXcd d = displacement_matrix(-beta, space);
  return std::sqrt(static_cast<double>(m)) * d(n, s).real();
}

SystemConfig fock2_system() {
  SystemConfig cfg;
  cfg.kind = SystemKind::Single;
  cfg.g01 = 0.839;
  cfg.kappa = 0.002;
  cfg.gamma_m1 = 0.0004;
  cfg.nc = 3;
  cfg.nm1 = 10;
  return cfg;
}

}  // namespace

TEST_CASE("annihilation operator ladder structure") {
  const Eigen::MatrixXcd a2 = annihilation_op({2});
  CHECK(a2(0, 1).real() == doctest::Approx(1.0));
  CHECK(a2(1, 0) == std::complex<double>(0.0));
  CHECK(a2(0, 0) == std::complex<double>(0.0));
  CHECK(a2(1, 1) == std::complex<double>(0.0));

  const Eigen::MatrixXcd a3 = annihilation_op({3});
  CHECK(a3(0, 1).real() == doctest::Approx(1.0));
  CHECK(a3(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
  CHECK(a3.cwiseAbs().sum() == doctest::Approx(1.0 + std::sqrt(2.0)));
}

TEST_CASE("commutator is identity with a single corner correction") {
  const int dim = 7;
  const Eigen::MatrixXcd a = annihilation_op({dim});
  const Eigen::MatrixXcd comm = a * a.adjoint() - a.adjoint() * a;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      if (i != j) {
        CHECK(std::abs(comm(i, j)) < 1e-14);
      } else if (i < dim - 1) {
        CHECK(comm(i, i).real() == doctest::Approx(1.0));
      } else {
        CHECK(comm(i, i).real() == doctest::Approx(1.0 - dim));
      }
    }
}

TEST_CASE("displacement at beta = 0 is the identity") {
  const Eigen::MatrixXcd d = displacement_matrix(0.0, {12});
  CHECK((d - Eigen::MatrixXcd::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("displacement column 0 is the coherent state") {
  const double beta = 0.5;
  const Eigen::MatrixXcd d = displacement_matrix(beta, {40});
  double fact = 1.0;
  for (int n = 0; n < 12; ++n) {
    if (n > 0) fact *= n;
    const double expected = std::exp(-beta * beta / 2.0) * std::pow(beta, n) / std::sqrt(fact);
    CHECK(d(n, 0).real() == doctest::Approx(expected).epsilon(1e-10));
    CHECK(std::abs(d(n, 0).imag()) < 1e-14);
  }
}

TEST_CASE("displacement inverse property") {
  const Eigen::MatrixXcd d1 = displacement_matrix(1.0, {60});
  const Eigen::MatrixXcd d2 = displacement_matrix(-1.0, {60});
  CHECK((d1 * d2 - Eigen::MatrixXcd::Identity(60, 60)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("associated Laguerre polynomials") {
  CHECK(laguerre_assoc(0, 3, 1.7) == doctest::Approx(1.0));
  CHECK(laguerre_assoc(0, 0, -4.0) == doctest::Approx(1.0));
  CHECK(laguerre_assoc(1, 0, 2.0) == doctest::Approx(-1.0));
  CHECK(laguerre_assoc(3, 2, 0.7) == doctest::Approx(laguerre_series(3, 2, 0.7)).epsilon(1e-12));

  // recurrence against the series over a small grid, negative k included
  for (int n = 0; n <= 8; ++n)
    for (int k = -n; k <= 5; ++k)
      for (double x : {0.1, 0.9, 2.4, 3.1})
        CHECK(laguerre_assoc(n, k, x) ==
              doctest::Approx(laguerre_series(n, k, x)).epsilon(1e-9));
}

TEST_CASE("displaced-Fock coefficients, closed form vs definition") {
  SUBCASE("beta = 0 reduces to sqrt(m) delta_ns") {
    CHECK(displaced_fock_coeff(3, 4, 4, 0.0) == doctest::Approx(std::sqrt(3.0)));
    CHECK(displaced_fock_coeff(1, 2, 5, 0.0) == doctest::Approx(0.0));
    CHECK(displaced_fock_coeff(2, 5, 2, 0.0) == doctest::Approx(0.0));
  }
  SUBCASE("vacuum to vacuum element") {
    for (double beta : {0.1, 0.839, 1.7})
      CHECK(displaced_fock_coeff(1, 0, 0, beta) ==
            doctest::Approx(std::exp(-beta * beta / 2.0)).epsilon(1e-12));
  }
  SUBCASE("matrix-exponential oracle") {
    CHECK(displaced_fock_coeff(1, 0, 2, 0.839) ==
          doctest::Approx(coeff_oracle(1, 0, 2, 0.839)).epsilon(1e-8));
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pick_m(1, 2), pick_n(0, 12);
    std::uniform_real_distribution<double> pick_beta(0.0, 2.0);
    for (int trial = 0; trial < 40; ++trial) {
      const int m = pick_m(rng);
      const int n = pick_n(rng);
      const int s = pick_n(rng);
      const double beta = pick_beta(rng);
      const double got = displaced_fock_coeff(m, n, s, beta);
      CHECK(std::abs(got - coeff_oracle(m, n, s, beta)) < 1e-8);
    }
  }
  SUBCASE("swap symmetry") {
    for (int n = 0; n <= 6; ++n)
      for (int s = 0; s <= n; ++s) {
        const double sign = ((n - s) % 2 == 0) ? 1.0 : -1.0;
        CHECK(displaced_fock_coeff(1, n, s, 0.9) ==
              doctest::Approx(sign * displaced_fock_coeff(1, s, n, 0.9)).epsilon(1e-12));
      }
  }
}

TEST_CASE("carrier leak coefficient vanishes at the beta = 1 root") {
  CHECK(carrier_leak_coeff(1, 1.0) < 1e-15);
  CHECK(carrier_leak_coeff(0, 0.839) == doctest::Approx(std::exp(-0.839 * 0.839 / 2.0)));
}

TEST_CASE("eigenenergies") {
  SystemConfig cfg = fock2_system();
  SUBCASE("single") {
    CHECK(eigenenergy_single(0, 3, cfg) == doctest::Approx(3.0 * cfg.omega_m1));
    CHECK(eigenenergy_single(1, 0, cfg) == doctest::Approx(-cfg.chi1()));
    CHECK(eigenenergy_single(2, 1, cfg) ==
          doctest::Approx(cfg.omega_m1 * (1.0 - 4.0 * 0.839 * 0.839)));
  }
  SUBCASE("linear in n, quadratic in m, transition gaps") {
    for (int m = 1; m <= 2; ++m)
      for (int n = 0; n <= 5; ++n)
        for (int s = 0; s <= 5; ++s) {
          const double gap = eigenenergy_single(m, n, cfg) - eigenenergy_single(m - 1, s, cfg);
          const double expected = (n - s) * cfg.omega_m1 - (2 * m - 1) * cfg.chi1();
          CHECK(gap == doctest::Approx(expected).epsilon(1e-12));
        }
  }
  SUBCASE("double") {
    SystemConfig two;
    two.kind = SystemKind::Double;
    two.omega_m2 = 0.918;
    two.g01 = 1.0;
    two.g02 = 0.918;
    two.nm1 = two.nm2 = 5;
    two.nc = 3;
    CHECK(eigenenergy_double(0, 0, 0, two) == doctest::Approx(0.0));
    CHECK(eigenenergy_double(1, 0, 0, two) == doctest::Approx(-(two.chi1() + two.chi2())));
    CHECK(eigenenergy_double(1, 1, 1, two) ==
          doctest::Approx(two.omega_m1 + two.omega_m2 - two.chi1() - two.chi2()));
    CHECK_THROWS_AS(eigenenergy_single(0, 0, two), std::invalid_argument);
  }
}

TEST_CASE("eigenenergy kind mismatch throws") {
  SystemConfig cfg = fock2_system();
  CHECK_THROWS_AS(eigenenergy_double(0, 0, 0, cfg), std::invalid_argument);
}

TEST_CASE("carrier detunings per target family") {
  SystemConfig cfg = fock2_system();
  const double chi = cfg.chi1();

  SUBCASE("Fock |2>") {
    const DetuningSet set = carrier_detunings(TargetSpec::fock(2), cfg);
    REQUIRE(set.size() == 2);
    CHECK(set.deltas[0] == doctest::Approx(-chi).epsilon(1e-15));
    CHECK(set.deltas[1] == doctest::Approx(-chi - 2.0).epsilon(1e-15));
    CHECK(set.deltas[1] - set.deltas[0] == doctest::Approx(-2.0 * cfg.omega_m1).epsilon(1e-14));
  }
  SUBCASE("(|1> + |2>)/sqrt(2) needs three pulses") {
    const DetuningSet set = carrier_detunings(TargetSpec::superposition({1, 2}), cfg);
    REQUIRE(set.size() == 3);
    CHECK(set.deltas[0] == doctest::Approx(-chi));
    CHECK(set.deltas[1] == doctest::Approx(-chi - 1.0));
    CHECK(set.deltas[2] == doctest::Approx(-chi - 2.0));
  }
  SUBCASE("(|0> + |2>)/sqrt(2) skips the vacuum component") {
    const DetuningSet set = carrier_detunings(TargetSpec::superposition({0, 2}), cfg);
    REQUIRE(set.size() == 2);
    CHECK(set.deltas[1] == doctest::Approx(-chi - 2.0));
  }
  SUBCASE("Psi+ needs three pulses") {
    SystemConfig two;
    two.kind = SystemKind::Double;
    two.omega_m2 = 0.598;
    two.g01 = 1.0;
    two.g02 = 0.595;
    two.nm1 = two.nm2 = 5;
    const double s = two.chi1() + two.chi2();
    const DetuningSet set = carrier_detunings(TargetSpec::bell_state(BellState::PsiPlus), two);
    REQUIRE(set.size() == 3);
    CHECK(set.deltas[0] == doctest::Approx(-s));
    CHECK(set.deltas[1] == doctest::Approx(-s - two.omega_m1));
    CHECK(set.deltas[2] == doctest::Approx(-s - two.omega_m2));
  }
  SUBCASE("unsupported family for the system kind") {
    CHECK_THROWS_AS(carrier_detunings(TargetSpec::bell_state(BellState::PhiPlus), cfg),
                    std::invalid_argument);
  }
}

TEST_CASE("off-resonance validation") {
  SystemConfig cfg = fock2_system();
  const DetuningSet set = carrier_detunings(TargetSpec::fock(2), cfg);

  SUBCASE("vanishing drive passes with infinite ratio") {
    const auto report = validate_offresonance(0.0, cfg, set, 10.0);
    CHECK(report.pass);
    CHECK(std::isinf(report.worst_ratio));
  }
  SUBCASE("boundary at margin 1 fails") {
    const auto probe = validate_offresonance(1.0, cfg, set, 10.0);
    // omega_max equal to the worst |delta|/|A| drives the worst ratio to 1
    const auto boundary = validate_offresonance(probe.worst_ratio, cfg, set, 1.0);
    CHECK(boundary.worst_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(boundary.pass);
  }
  SUBCASE("weak drive passes at margin 10") {
    const auto report = validate_offresonance(0.02, cfg, set, 10.0);
    CHECK(report.pass);
    CHECK(report.worst_ratio > 10.0);
  }
  SUBCASE("report names the worst transition") {
    const auto report = validate_offresonance(0.2, cfg, set, 10.0);
    CHECK(report.worst_pulse >= 0);
    CHECK(report.worst_indices[0] >= 0);
    CHECK(report.describe(cfg).find("worst") != std::string::npos);
  }
}

TEST_CASE("off-resonance validation for two-resonator systems") {
  SystemConfig two;
  two.kind = SystemKind::Double;
  two.omega_m2 = 0.918;
  two.g01 = 1.0;
  two.g02 = 0.918;
  two.nm1 = two.nm2 = 5;
  two.nc = 3;
  const DetuningSet set = carrier_detunings(TargetSpec::bell_state(BellState::PhiPlus), two);

  // beta_i = 1 makes chi_i = omega_i, so a one- to two-photon transition sits
  // exactly on the second carrier; the validator must flag the degeneracy
  const auto report = validate_offresonance(0.1, two, set, 10.0);
  CHECK_FALSE(report.pass);
  CHECK(report.worst_ratio < 1e-9);
}

TEST_CASE("effective Hamiltonian for the two-resonator system") {
  SystemConfig two;
  two.kind = SystemKind::Double;
  two.omega_m2 = 0.918;
  two.g01 = 1.0;
  two.g02 = 0.918;
  two.nm1 = two.nm2 = 5;
  two.nc = 3;
  const DetuningSet set = carrier_detunings(TargetSpec::bell_state(BellState::PhiPlus), two);
  const double omega1 = 0.03, omega2 = 0.05;
  const Eigen::MatrixXcd h = build_effective_hamiltonian(two, set, {omega1, omega2});
  const int mech = two.nm1 * two.nm2;
  REQUIRE(h.rows() == 2 * mech);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-15);

  // up-pulse element on |0,0,0> and the sideband element toward |0,1,1>
  const double a00 = displaced_fock_coeff(1, 0, 0, two.beta1()) *
                     displaced_fock_coeff(1, 0, 0, two.beta2());
  const double a11 = displaced_fock_coeff(1, 0, 1, two.beta1()) *
                     displaced_fock_coeff(1, 0, 1, two.beta2());
  CHECK(h(mech + 0, 0).real() == doctest::Approx(omega1 * a00).epsilon(1e-12));
  CHECK(h(mech + 0, 1 * two.nm2 + 1).real() == doctest::Approx(omega2 * a11).epsilon(1e-12));
}

TEST_CASE("effective Hamiltonian in the dressed basis") {
  SystemConfig cfg = fock2_system();
  const DetuningSet set = carrier_detunings(TargetSpec::fock(2), cfg);

  SUBCASE("zero amplitudes give the zero matrix") {
    const Eigen::MatrixXcd h = build_effective_hamiltonian(cfg, set, {0.0, 0.0});
    CHECK(h.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("single-pulse matrix elements are Omega A_nn") {
    const double omega = 0.013;
    const Eigen::MatrixXcd h = build_effective_hamiltonian(cfg, set, {omega, 0.0});
    for (int n = 0; n < cfg.nm1; ++n)
      CHECK(h(cfg.nm1 + n, n).real() ==
            doctest::Approx(omega * displaced_fock_coeff(1, n, n, cfg.beta1())).epsilon(1e-12));
  }
  SUBCASE("second pulse couples |1, n~> to |0, n+2>") {
    const double omega = 0.02;
    const Eigen::MatrixXcd h = build_effective_hamiltonian(cfg, set, {0.0, omega});
    CHECK(h(cfg.nm1 + 0, 2).real() ==
          doctest::Approx(omega * displaced_fock_coeff(1, 0, 2, cfg.beta1())).epsilon(1e-12));
  }
  SUBCASE("Hermitian for random amplitudes") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> amp(-0.2, 0.2);
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::MatrixXcd h = build_effective_hamiltonian(cfg, set, {amp(rng), amp(rng)});
      CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
}
