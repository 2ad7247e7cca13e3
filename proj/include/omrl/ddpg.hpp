#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "omrl/control.hpp"
#include "omrl/mlp.hpp"

namespace omrl {

struct DdpgHyper {
  int epochs = 800;
  int warmup_epochs = 10;      // uniformly random episodes before learning
  int batch_size = 128;
  double tau = 0.1;            // soft-update fraction per gradient step
  double gamma_discount = 0.99;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  double noise_sigma = 0.2;    // initial exploration stddev, fraction of omega_max
  double noise_decay = 0.999;  // multiplicative decay per epoch
  int buffer_capacity = 100000;
  int hidden1 = 256;
  int hidden2 = 256;
  std::uint64_t seed = 0;
  int checkpoint_every = 100;  // epochs; 0 disables periodic checkpoints
  double stop_fidelity = 2.0;  // early-stop threshold on best fidelity; > 1 disables

  void validate() const;
};

struct Transition {
  std::shared_ptr<const Eigen::VectorXf> obs;
  std::shared_ptr<const Eigen::VectorXf> next_obs;
  Eigen::VectorXf action;
  float reward = 0.0f;
};

struct Batch {
  Eigen::MatrixXf obs;       // obs_dim x B
  Eigen::MatrixXf action;    // L x B
  Eigen::MatrixXf reward;    // 1 x B
  Eigen::MatrixXf next_obs;  // obs_dim x B
};

// Bounded FIFO store of off-policy transitions.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool can_sample(int batch) const { return size() >= static_cast<std::size_t>(batch); }
  const Transition& at(std::size_t i) const { return items_[i]; }

  // Uniform sample with replacement into preallocated batch matrices.
  void sample(int batch, std::mt19937_64& rng, Batch& out) const;

 private:
  std::size_t capacity_;
  std::deque<Transition> items_;
};

struct UpdateLosses {
  double critic_loss = 0.0;
  double actor_value = 0.0;  // mean Q under the current policy
};

// One DDPG gradient step: regress the critic toward
// r + gamma Q'(s', mu'(s')), ascend the actor on Q, soft-update the targets.
UpdateLosses ddpg_update(Mlp<float>& actor, Mlp<float>& critic, Mlp<float>& target_actor,
                         Mlp<float>& target_critic, AdamOptimizer<float>& actor_opt,
                         AdamOptimizer<float>& critic_opt, const Batch& batch, float tau,
                         float gamma_discount, float actor_lr, float critic_lr);

struct CheckpointMeta {
  std::uint32_t format_version = 1;
  std::uint32_t state_dim = 0;   // joint Hilbert dimension D
  std::uint32_t action_dim = 0;  // pulse count L
  std::uint64_t seed = 0;
  double action_bound = 0.0;
};

void save_checkpoint(const std::string& path, const CheckpointMeta& meta,
                     const Mlp<float>& actor, const Mlp<float>& critic);

struct Checkpoint {
  CheckpointMeta meta;
  Mlp<float> actor;
  Mlp<float> critic;
};

Checkpoint load_checkpoint(const std::string& path);

class DdpgAgent {
 public:
  DdpgAgent(int obs_dim, int action_dim, double action_bound, const DdpgHyper& hyper,
            std::mt19937_64& rng);

  Eigen::VectorXd act(const Eigen::VectorXd& obs) const;
  Eigen::VectorXd act_noisy(const Eigen::VectorXd& obs, double sigma_abs,
                            std::mt19937_64& rng) const;
  Eigen::VectorXd random_action(std::mt19937_64& rng) const;

  void remember(Transition t) { buffer_.push(std::move(t)); }
  bool ready() const { return buffer_.can_sample(hyper_.batch_size); }
  UpdateLosses update(std::mt19937_64& rng);

  Mlp<float>& actor() { return actor_; }
  Mlp<float>& critic() { return critic_; }
  Mlp<float>& target_actor() { return target_actor_; }
  Mlp<float>& target_critic() { return target_critic_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  double action_bound() const { return bound_; }

 private:
  DdpgHyper hyper_;
  int obs_dim_;
  int action_dim_;
  double bound_;
  Mlp<float> actor_, critic_, target_actor_, target_critic_;
  AdamOptimizer<float> actor_opt_, critic_opt_;
  ReplayBuffer buffer_;
  mutable Batch batch_;
};

struct TrainingReport {
  std::vector<double> epoch_fidelity;  // final-step fidelity per epoch
  std::vector<double> epoch_reward;    // summed dense reward per epoch
  std::vector<double> best_fidelity;   // running maximum of epoch_fidelity
  std::vector<double> noise_sigma;     // absolute exploration sigma per epoch
  PulseSchedule best_schedule;
  double best_fidelity_value = 0.0;
  int best_epoch = -1;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> checkpoint_paths;
  int epochs_run = 0;
};

using EpochCallback = std::function<void(int, const TrainingReport&)>;

// Runs the full training loop on one environment. Checkpoints are written
// under checkpoint_dir when non-empty; on_epoch (if set) fires after every
// episode with the report so far.
TrainingReport train(Environment& env, const DdpgHyper& hyper,
                     const std::string& checkpoint_dir = "",
                     const EpochCallback& on_epoch = nullptr);

}  // namespace omrl
