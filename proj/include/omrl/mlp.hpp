#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace omrl {

enum class Activation : std::uint8_t { Linear = 0, ReLU = 1, TanhBounded = 2 };

// Fully connected network with per-layer activation tags. Batches are stored
// column-wise (one sample per column). TanhBounded scales tanh by out_scale,
// giving a bounded odd saturating output layer.
template <typename Scalar>
class Mlp {
 public:
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Mlp() = default;
  Mlp(std::vector<int> sizes, std::vector<Activation> acts, Scalar out_scale = Scalar(1))
      : sizes_(std::move(sizes)), acts_(std::move(acts)), out_scale_(out_scale) {
    if (sizes_.size() < 2) throw std::invalid_argument("Mlp needs at least two layer sizes");
    if (acts_.size() != sizes_.size() - 1)
      throw std::invalid_argument("Mlp needs one activation per weight layer");
    const int n = layer_count();
    w_.resize(n);
    b_.resize(n);
    gw_.resize(n);
    gb_.resize(n);
    for (int l = 0; l < n; ++l) {
      w_[l] = Mat::Zero(sizes_[l + 1], sizes_[l]);
      b_[l] = Vec::Zero(sizes_[l + 1]);
      gw_[l] = Mat::Zero(sizes_[l + 1], sizes_[l]);
      gb_[l] = Vec::Zero(sizes_[l + 1]);
    }
  }

  int layer_count() const { return static_cast<int>(sizes_.size()) - 1; }
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  const std::vector<int>& layer_sizes() const { return sizes_; }
  const std::vector<Activation>& activations() const { return acts_; }
  Scalar out_scale() const { return out_scale_; }

  // Fan-in scaled uniform init; the output layer starts near zero so early
  // actions and values stay small.
  void init_uniform(std::mt19937_64& rng) {
    for (int l = 0; l < layer_count(); ++l) {
      const Scalar bound = (l == layer_count() - 1)
                               ? Scalar(3e-3)
                               : Scalar(1) / std::sqrt(Scalar(sizes_[l]));
      std::uniform_real_distribution<double> dist(-double(bound), double(bound));
      for (Eigen::Index i = 0; i < w_[l].size(); ++i) w_[l].data()[i] = Scalar(dist(rng));
      for (Eigen::Index i = 0; i < b_[l].size(); ++i) b_[l].data()[i] = Scalar(dist(rng));
    }
  }

  // Pure forward pass; no state is kept.
  Mat forward(const Mat& x) const {
    check_input(x);
    Mat h = x;
    for (int l = 0; l < layer_count(); ++l) {
      Mat z = (w_[l] * h).colwise() + b_[l];
      apply_activation(acts_[l], z);
      h = std::move(z);
    }
    return h;
  }

  // Forward pass retaining layer inputs and pre-activations for backward().
  Mat forward_cached(const Mat& x) {
    check_input(x);
    inputs_.assign(1, x);
    pre_.clear();
    Mat h = x;
    for (int l = 0; l < layer_count(); ++l) {
      Mat z = (w_[l] * h).colwise() + b_[l];
      pre_.push_back(z);
      apply_activation(acts_[l], z);
      h = z;
      if (l + 1 < layer_count()) inputs_.push_back(h);
    }
    return h;
  }

  // Backpropagates dLoss/dOutput, optionally accumulating parameter
  // gradients, and returns dLoss/dInput.
  Mat backward(const Mat& dy, bool accumulate = true) {
    if (pre_.empty()) throw std::logic_error("Mlp::backward without forward_cached");
    Mat delta = dy;
    for (int l = layer_count() - 1; l >= 0; --l) {
      apply_activation_grad(acts_[l], pre_[l], delta);
      if (accumulate) {
        gw_[l].noalias() += delta * inputs_[l].transpose();
        gb_[l].noalias() += delta.rowwise().sum();
      }
      if (l > 0) delta = w_[l].transpose() * delta;
    }
    return w_[0].transpose() * delta;
  }

  void zero_grads() {
    for (auto& g : gw_) g.setZero();
    for (auto& g : gb_) g.setZero();
  }

  int param_count() const {
    int n = 0;
    for (int l = 0; l < layer_count(); ++l)
      n += static_cast<int>(w_[l].size() + b_[l].size());
    return n;
  }

  // Applies fn(param_matrix, grad_matrix) to every parameter tensor.
  template <typename Fn>
  void visit_params(Fn&& fn) {
    for (int l = 0; l < layer_count(); ++l) {
      fn(w_[l], gw_[l]);
      fn(b_[l], gb_[l]);
    }
  }

  template <typename Fn>
  void visit_params(Fn&& fn) const {
    for (int l = 0; l < layer_count(); ++l) {
      fn(w_[l], gw_[l]);
      fn(b_[l], gb_[l]);
    }
  }

  Mat& weights(int l) { return w_[l]; }
  Vec& biases(int l) { return b_[l]; }
  const Mat& weights(int l) const { return w_[l]; }
  const Vec& biases(int l) const { return b_[l]; }

 private:
  void check_input(const Mat& x) const {
    if (x.rows() != input_dim()) throw std::invalid_argument("Mlp input dimension mismatch");
  }

  void apply_activation(Activation a, Mat& z) const {
    switch (a) {
      case Activation::Linear:
        break;
      case Activation::ReLU:
        z = z.cwiseMax(Scalar(0));
        break;
      case Activation::TanhBounded:
        z = out_scale_ * z.array().tanh().matrix();
        break;
    }
  }

  // delta <- delta .* act'(pre)
  void apply_activation_grad(Activation a, const Mat& pre, Mat& delta) const {
    switch (a) {
      case Activation::Linear:
        break;
      case Activation::ReLU:
        delta.array() *= (pre.array() > Scalar(0)).template cast<Scalar>();
        break;
      case Activation::TanhBounded: {
        const auto t = pre.array().tanh();
        delta.array() *= out_scale_ * (Scalar(1) - t.square());
        break;
      }
    }
  }

  std::vector<int> sizes_;
  std::vector<Activation> acts_;
  Scalar out_scale_ = Scalar(1);
  std::vector<Mat> w_, gw_;
  std::vector<Vec> b_, gb_;
  std::vector<Mat> inputs_, pre_;
};

// Adam with bias correction; one slot pair per parameter tensor.
template <typename Scalar>
class AdamOptimizer {
 public:
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  AdamOptimizer() = default;
  explicit AdamOptimizer(Mlp<Scalar>& net, Scalar beta1 = Scalar(0.9),
                         Scalar beta2 = Scalar(0.999), Scalar eps = Scalar(1e-8))
      : beta1_(beta1), beta2_(beta2), eps_(eps) {
    net.visit_params([&](auto& p, auto&) {
      m_.push_back(Mat::Zero(p.rows(), p.cols()));
      v_.push_back(Mat::Zero(p.rows(), p.cols()));
    });
  }

  void step(Mlp<Scalar>& net, Scalar lr) {
    ++t_;
    const Scalar bc1 = Scalar(1) - std::pow(beta1_, Scalar(t_));
    const Scalar bc2 = Scalar(1) - std::pow(beta2_, Scalar(t_));
    std::size_t slot = 0;
    net.visit_params([&](auto& p, auto& g) {
      auto& m = m_[slot];
      auto& v = v_[slot];
      m = beta1_ * m + (Scalar(1) - beta1_) * g;
      v.array() = beta2_ * v.array() + (Scalar(1) - beta2_) * g.array().square();
      p.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps_);
      ++slot;
    });
  }

 private:
  Scalar beta1_ = Scalar(0.9), beta2_ = Scalar(0.999), eps_ = Scalar(1e-8);
  long t_ = 0;
  std::vector<Mat> m_, v_;
};

// target <- tau * main + (1 - tau) * target, parameterwise.
template <typename Scalar>
void soft_update(Mlp<Scalar>& target, const Mlp<Scalar>& main, Scalar tau) {
  for (int l = 0; l < target.layer_count(); ++l) {
    target.weights(l) = tau * main.weights(l) + (Scalar(1) - tau) * target.weights(l);
    target.biases(l) = tau * main.biases(l) + (Scalar(1) - tau) * target.biases(l);
  }
}

}  // namespace omrl
