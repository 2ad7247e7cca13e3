#include "omrl/diagnostics.hpp"

#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

namespace omrl {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

double fidelity(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& psi) {
  if (rho.rows() != rho.cols() || rho.rows() != psi.size())
    throw std::invalid_argument("fidelity: dimension mismatch");
  const std::complex<double> f = psi.dot(rho * psi);  // psi^dag rho psi
  return f.real();
}

double fidelity(const Eigen::MatrixXcd& rho_mech, const TargetSpec& target,
                const SystemConfig& cfg) {
  return fidelity(rho_mech, target.mech_vector(cfg.nm1, cfg.nm2));
}

Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, const std::vector<int>& dims,
                               const std::vector<int>& keep) {
  const int total = std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
  if (rho.rows() != total || rho.cols() != total)
    throw std::invalid_argument("partial_trace: dims do not match the state");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= static_cast<int>(dims.size()))
      throw std::invalid_argument("partial_trace: keep index out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("partial_trace: keep indices must be strictly ascending");
  }

  // strides of each factor in the flattened index (slowest factor first)
  std::vector<int> stride(dims.size());
  int acc = 1;
  for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
    stride[f] = acc;
    acc *= dims[f];
  }
  std::vector<int> traced;
  for (int f = 0; f < static_cast<int>(dims.size()); ++f)
    if (std::find(keep.begin(), keep.end(), f) == keep.end()) traced.push_back(f);

  int kept_dim = 1;
  for (int f : keep) kept_dim *= dims[f];
  int traced_dim = 1;
  for (int f : traced) traced_dim *= dims[f];

  auto offset = [&](const std::vector<int>& factors, int flat) {
    int off = 0;
    for (int f = static_cast<int>(factors.size()) - 1; f >= 0; --f) {
      off += (flat % dims[factors[f]]) * stride[factors[f]];
      flat /= dims[factors[f]];
    }
    return off;
  };

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(kept_dim, kept_dim);
  for (int i = 0; i < kept_dim; ++i)
    for (int j = 0; j < kept_dim; ++j) {
      const int oi = offset(keep, i);
      const int oj = offset(keep, j);
      std::complex<double> sum = 0.0;
      for (int t = 0; t < traced_dim; ++t) {
        const int ot = offset(traced, t);
        sum += rho(oi + ot, oj + ot);
      }
      out(i, j) = sum;
    }
  return out;
}

Eigen::MatrixXcd reduced_mech(const Eigen::MatrixXcd& rho, const SystemConfig& cfg) {
  const int mech = cfg.mech_dim();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(mech, mech);
  for (int m = 0; m < cfg.nc; ++m) out += rho.block(m * mech, m * mech, mech, mech);
  return out;
}

WignerGrid wigner(const Eigen::MatrixXcd& rho_b, double re_min, double re_max, int re_pts,
                  double im_min, double im_max, int im_pts) {
  if (rho_b.rows() != rho_b.cols()) throw std::invalid_argument("wigner: state must be square");
  const int dim = static_cast<int>(rho_b.rows());

  // Displaced parity folds to W = (2/pi) Tr[rho D(2 eta) P]; the exact
  // closed-form elements of D(2 eta) on the state's support avoid any
  // truncation bias at large |eta|.
  WignerGrid grid;
  grid.re_axis = Eigen::VectorXd::LinSpaced(re_pts, re_min, re_max);
  grid.im_axis = Eigen::VectorXd::LinSpaced(im_pts, im_min, im_max);
  grid.values.resize(re_pts, im_pts);

  Eigen::MatrixXcd disp(dim, dim);
  for (int i = 0; i < re_pts; ++i)
    for (int j = 0; j < im_pts; ++j) {
      const std::complex<double> alpha =
          2.0 * std::complex<double>(grid.re_axis(i), grid.im_axis(j));
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) disp(r, c) = displacement_element(r, c, alpha);
      std::complex<double> w = 0.0;
      for (int m = 0; m < dim; ++m) {
        const std::complex<double> diag = rho_b.row(m) * disp.col(m);
        w += (m % 2 == 0) ? diag : -diag;
      }
      grid.values(i, j) = (2.0 / M_PI) * w.real();
    }
  return grid;
}

Eigen::MatrixXd fock_matrix_map(const Eigen::MatrixXcd& rho) {
  return rho.cwiseAbs();
}

Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& rho, int d1, int d2, int mode) {
  if (rho.rows() != rho.cols() || rho.rows() != d1 * d2)
    throw std::invalid_argument("partial_transpose: dims do not match the state");
  if (mode != 1 && mode != 2) throw std::invalid_argument("partial_transpose: mode must be 1 or 2");
  Eigen::MatrixXcd out(d1 * d2, d1 * d2);
  for (int i1 = 0; i1 < d1; ++i1)
    for (int i2 = 0; i2 < d2; ++i2)
      for (int j1 = 0; j1 < d1; ++j1)
        for (int j2 = 0; j2 < d2; ++j2) {
          const int row = i1 * d2 + i2;
          const int col = j1 * d2 + j2;
          const int srow = (mode == 2) ? i1 * d2 + j2 : j1 * d2 + i2;
          const int scol = (mode == 2) ? j1 * d2 + i2 : i1 * d2 + j2;
          out(row, col) = rho(srow, scol);
        }
  return out;
}

double log_negativity(const Eigen::MatrixXcd& rho_b1b2, int d1, int d2) {
  const Eigen::MatrixXcd pt = partial_transpose(rho_b1b2, d1, d2, 2);
  const Eigen::MatrixXcd sym = 0.5 * (pt + pt.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym, Eigen::EigenvaluesOnly);
  const double trace_norm = es.eigenvalues().cwiseAbs().sum();
  return std::max(0.0, std::log2(trace_norm));
}

}  // namespace omrl
