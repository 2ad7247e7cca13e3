#include "omrl/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "omrl/errors.hpp"

namespace omrl {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};
using Triplet = Eigen::Triplet<std::complex<double>>;

// k_B T / omega expressed through the thermal occupation of the mode; goes
// to zero with n_th, so a zero-temperature bath carries no dephasing.
double scaled_bath_temperature(double n_th) {
  if (n_th <= 0.0) return 0.0;
  return 1.0 / std::log1p(1.0 / n_th);
}

}  // namespace

void PulseSchedule::validate(double omega_max) const {
  if (steps() < 1) throw std::invalid_argument("schedule must have at least one step");
  if (pulses() != detunings.size())
    throw std::invalid_argument("schedule amplitude columns must match detunings");
  if (!(total_time > 0)) throw std::invalid_argument("schedule total_time must be > 0");
  if (amplitudes.cwiseAbs().maxCoeff() > omega_max + 1e-12)
    throw std::invalid_argument("schedule amplitudes exceed omega_max");
}

int joint_index(const SystemConfig& cfg, int m, int n1, int n2) {
  return (m * cfg.nm1 + n1) * cfg.nm2 + n2;
}

Eigen::MatrixXcd vacuum_density(const SystemConfig& cfg) {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(cfg.dim(), cfg.dim());
  rho(0, 0) = 1.0;
  return rho;
}

double trace_error(const Eigen::MatrixXcd& rho) {
  return std::abs(rho.trace() - std::complex<double>(1.0));
}

double hermiticity_error(const Eigen::MatrixXcd& rho) {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd sym = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double purity(const Eigen::MatrixXcd& rho) {
  return rho.squaredNorm();  // Tr rho^2 for Hermitian rho
}

Eigen::MatrixXcd lindblad_dissipator(const Eigen::MatrixXcd& o, const Eigen::MatrixXcd& rho) {
  if (o.rows() != o.cols() || o.rows() != rho.rows() || rho.rows() != rho.cols())
    throw std::invalid_argument("lindblad_dissipator: shape mismatch");
  const Eigen::MatrixXcd od_o = o.adjoint() * o;
  return o * rho * o.adjoint() - 0.5 * (rho * od_o + od_o * rho);
}

LindbladModel::LindbladModel(const SystemConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const int dim = cfg_.dim();
  const int nm1 = cfg_.nm1;
  const int nm2 = cfg_.nm2;

  std::vector<Triplet> ta, th;
  for (int m = 0; m < cfg_.nc; ++m)
    for (int n1 = 0; n1 < nm1; ++n1)
      for (int n2 = 0; n2 < nm2; ++n2) {
        const int row = joint_index(cfg_, m, n1, n2);
        if (m > 0) ta.emplace_back(joint_index(cfg_, m - 1, n1, n2), row, std::sqrt(double(m)));
        // omega b^dag b terms
        double diag = n1 * cfg_.omega_m1;
        if (!cfg_.is_single()) diag += n2 * cfg_.omega_m2;
        if (diag != 0.0) th.emplace_back(row, row, diag);
        // -g0 a^dag a (b^dag + b): a^dag a is diagonal in m
        if (m > 0) {
          if (n1 > 0)
            th.emplace_back(joint_index(cfg_, m, n1 - 1, n2), row, -cfg_.g01 * m * std::sqrt(double(n1)));
          if (n1 < nm1 - 1)
            th.emplace_back(joint_index(cfg_, m, n1 + 1, n2), row, -cfg_.g01 * m * std::sqrt(double(n1 + 1)));
          if (!cfg_.is_single()) {
            if (n2 > 0)
              th.emplace_back(joint_index(cfg_, m, n1, n2 - 1), row, -cfg_.g02 * m * std::sqrt(double(n2)));
            if (n2 < nm2 - 1)
              th.emplace_back(joint_index(cfg_, m, n1, n2 + 1), row, -cfg_.g02 * m * std::sqrt(double(n2 + 1)));
          }
        }
      }
  a_.resize(dim, dim);
  a_.setFromTriplets(ta.begin(), ta.end());
  adag_ = SpMat(a_.adjoint());
  h0_.resize(dim, dim);
  h0_.setFromTriplets(th.begin(), th.end());

  // Dressed jump operators b_i - beta_i a^dag a, their thermal partners, and
  // the photon-number dephasing channel.
  auto mode_lowering = [&](int mode) {
    std::vector<Triplet> t;
    for (int m = 0; m < cfg_.nc; ++m)
      for (int n1 = 0; n1 < nm1; ++n1)
        for (int n2 = 0; n2 < nm2; ++n2) {
          const int row = joint_index(cfg_, m, n1, n2);
          if (mode == 1 && n1 > 0)
            t.emplace_back(joint_index(cfg_, m, n1 - 1, n2), row, std::sqrt(double(n1)));
          if (mode == 2 && n2 > 0)
            t.emplace_back(joint_index(cfg_, m, n1, n2 - 1), row, std::sqrt(double(n2)));
        }
    SpMat sp(dim, dim);
    sp.setFromTriplets(t.begin(), t.end());
    return sp;
  };
  SpMat photon_number(dim, dim);
  {
    std::vector<Triplet> t;
    for (int m = 1; m < cfg_.nc; ++m)
      for (int n1 = 0; n1 < nm1; ++n1)
        for (int n2 = 0; n2 < nm2; ++n2) {
          const int row = joint_index(cfg_, m, n1, n2);
          t.emplace_back(row, row, double(m));
        }
    photon_number.setFromTriplets(t.begin(), t.end());
  }

  auto add_jump = [&](const SpMat& op, double rate) {
    if (rate <= 0.0) return;
    SpMat scaled = std::sqrt(rate) * op;
    scaled.makeCompressed();
    jumps_.push_back(scaled);
    jumps_adj_.push_back(SpMat(scaled.adjoint()));
  };

  const int modes = cfg_.is_single() ? 1 : 2;
  for (int mode = 1; mode <= modes; ++mode) {
    const double gamma = (mode == 1) ? cfg_.gamma_m1 : cfg_.gamma_m2;
    const double n_th = (mode == 1) ? cfg_.n_th1 : cfg_.n_th2;
    const double beta = (mode == 1) ? cfg_.beta1() : cfg_.beta2();
    const SpMat b = mode_lowering(mode);
    const SpMat dressed_down = b - beta * photon_number;
    add_jump(dressed_down, gamma * (n_th + 1.0));
    add_jump(SpMat(SpMat(b.adjoint()) - beta * photon_number), gamma * n_th);
    add_jump(photon_number, 4.0 * gamma * scaled_bath_temperature(n_th) * beta * beta);
  }
  add_jump(a_, cfg_.kappa);

  SpMat damp = SpMat(kI * h0_);
  for (std::size_t k = 0; k < jumps_.size(); ++k)
    damp = damp + SpMat(0.5 * (jumps_adj_[k] * jumps_[k]));
  damp.makeCompressed();
  damp_ = damp;
  damp_adj_ = SpMat(damp.adjoint());
}

Eigen::MatrixXcd LindbladModel::cavity_number_op() const {
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(dim(), dim());
  for (int m = 0; m < cfg_.nc; ++m)
    for (int n1 = 0; n1 < cfg_.nm1; ++n1)
      for (int n2 = 0; n2 < cfg_.nm2; ++n2) n(joint_index(cfg_, m, n1, n2), joint_index(cfg_, m, n1, n2)) = m;
  return n;
}

Eigen::MatrixXcd LindbladModel::mech_number_op(int mode) const {
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(dim(), dim());
  for (int m = 0; m < cfg_.nc; ++m)
    for (int n1 = 0; n1 < cfg_.nm1; ++n1)
      for (int n2 = 0; n2 < cfg_.nm2; ++n2)
        n(joint_index(cfg_, m, n1, n2), joint_index(cfg_, m, n1, n2)) = (mode == 1) ? n1 : n2;
  return n;
}

Eigen::MatrixXcd LindbladModel::hamiltonian_at(double t, const PulseSchedule& sched) const {
  if (t < 0.0 || t > sched.total_time * (1.0 + 1e-12))
    throw std::invalid_argument("hamiltonian_at: t outside the episode");
  const int step = std::min(static_cast<int>(t / sched.dt()), sched.steps() - 1);
  std::complex<double> phi = 0.0;
  for (int l = 0; l < sched.pulses(); ++l)
    phi += sched.amplitudes(step, l) * std::exp(-kI * sched.detunings.deltas[l] * t);
  Eigen::MatrixXcd h = Eigen::MatrixXcd(h0_);
  h += phi * Eigen::MatrixXcd(adag_) + std::conj(phi) * Eigen::MatrixXcd(a_);
  return h;
}

void LindbladModel::rhs_into(Eigen::MatrixXcd& out, const Eigen::MatrixXcd& rho, double t,
                             const Eigen::VectorXd& amps, const DetuningSet& detunings,
                             Eigen::MatrixXcd& jrho) const {
  // drho/dt = -(G rho + rho G^dag) + sum_k J_k rho J_k^dag,
  // G = i (H0 + H_drive(t)) + (1/2) sum_k J_k^dag J_k
  out.noalias() = -(damp_ * rho);
  out.noalias() -= rho * damp_adj_;

  std::complex<double> phi = 0.0;
  for (int l = 0; l < amps.size(); ++l)
    phi += amps(l) * std::exp(-kI * detunings.deltas[l] * t);
  if (phi != std::complex<double>(0.0)) {
    const std::complex<double> iphi = kI * phi;
    const std::complex<double> iphic = kI * std::conj(phi);
    out.noalias() -= iphi * (adag_ * rho);
    out.noalias() -= iphic * (a_ * rho);
    out.noalias() += iphi * (rho * adag_);
    out.noalias() += iphic * (rho * a_);
  }
  for (std::size_t k = 0; k < jumps_.size(); ++k) {
    jrho.noalias() = jumps_[k] * rho;
    out.noalias() += jrho * jumps_adj_[k];
  }
}

Eigen::MatrixXcd LindbladModel::master_rhs(const Eigen::MatrixXcd& rho, double t,
                                           const PulseSchedule& sched) const {
  if (rho.rows() != dim() || rho.cols() != dim())
    throw std::invalid_argument("master_rhs: density matrix has the wrong dimension");
  const int step = std::min(static_cast<int>(t / sched.dt()), sched.steps() - 1);
  Eigen::MatrixXcd out(dim(), dim()), jrho(dim(), dim());
  rhs_into(out, rho, t, sched.amplitudes.row(step).transpose(), sched.detunings, jrho);
  return out;
}

int LindbladModel::substeps_per_step(const PulseSchedule& sched) const {
  double rate = std::max(cfg_.omega_m1, cfg_.g01);
  if (!cfg_.is_single()) rate = std::max({rate, cfg_.omega_m2, cfg_.g02});
  for (double d : sched.detunings.deltas) rate = std::max(rate, std::abs(d));
  return std::max(1, static_cast<int>(std::ceil(rate * sched.dt() / 0.05)));
}

void LindbladModel::step_inplace(Eigen::MatrixXcd& rho, int step, const PulseSchedule& sched,
                                 Workspace& ws) const {
  const int nsub = substeps_per_step(sched);
  const double h = sched.dt() / nsub;
  if (!(h > 0.0) || !std::isfinite(h)) throw PhysicsError("evolve_step: step size underflow");
  const Eigen::VectorXd amps = sched.amplitudes.row(step).transpose();
  const double t0 = step * sched.dt();

  for (int i = 0; i < nsub; ++i) {
    const double t = t0 + i * h;
    rhs_into(ws.k1, rho, t, amps, sched.detunings, ws.jrho);
    ws.stage.noalias() = rho + (0.5 * h) * ws.k1;
    rhs_into(ws.k2, ws.stage, t + 0.5 * h, amps, sched.detunings, ws.jrho);
    ws.stage.noalias() = rho + (0.5 * h) * ws.k2;
    rhs_into(ws.k3, ws.stage, t + 0.5 * h, amps, sched.detunings, ws.jrho);
    ws.stage.noalias() = rho + h * ws.k3;
    rhs_into(ws.k4, ws.stage, t + h, amps, sched.detunings, ws.jrho);
    rho.noalias() += (h / 6.0) * ws.k1;
    rho.noalias() += (h / 3.0) * ws.k2;
    rho.noalias() += (h / 3.0) * ws.k3;
    rho.noalias() += (h / 6.0) * ws.k4;
    // project numerical asymmetry away; the exact flow is Hermitian
    ws.tmp = rho.adjoint();
    rho += ws.tmp;
    rho *= 0.5;
  }
  if (trace_error(rho) > 1e-5)
    throw PhysicsError("evolve_step: trace drift beyond tolerance at step " + std::to_string(step));
}

Eigen::MatrixXcd LindbladModel::evolve_step(const Eigen::MatrixXcd& rho, int step,
                                            const PulseSchedule& sched) const {
  if (step < 0 || step >= sched.steps())
    throw std::invalid_argument("evolve_step: step outside the schedule");
  Workspace ws;
  const int d = dim();
  ws.k1.resize(d, d); ws.k2.resize(d, d); ws.k3.resize(d, d); ws.k4.resize(d, d);
  ws.stage.resize(d, d); ws.tmp.resize(d, d); ws.jrho.resize(d, d);
  Eigen::MatrixXcd out = rho;
  step_inplace(out, step, sched, ws);
  return out;
}

std::vector<Eigen::MatrixXcd> LindbladModel::evolve_episode(const Eigen::MatrixXcd& rho0,
                                                            const PulseSchedule& sched,
                                                            bool record) const {
  if (rho0.rows() != dim() || rho0.cols() != dim())
    throw std::invalid_argument("evolve_episode: initial state has the wrong dimension");
  Workspace ws;
  const int d = dim();
  ws.k1.resize(d, d); ws.k2.resize(d, d); ws.k3.resize(d, d); ws.k4.resize(d, d);
  ws.stage.resize(d, d); ws.tmp.resize(d, d); ws.jrho.resize(d, d);

  std::vector<Eigen::MatrixXcd> traj;
  Eigen::MatrixXcd rho = rho0;
  if (record) traj.push_back(rho);
  for (int s = 0; s < sched.steps(); ++s) {
    step_inplace(rho, s, sched, ws);
    if (record) traj.push_back(rho);
  }
  if (!record) traj.push_back(rho);
  return traj;
}

}  // namespace omrl
