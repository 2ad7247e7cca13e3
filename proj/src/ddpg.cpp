#include "omrl/ddpg.hpp"

#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "omrl/errors.hpp"

namespace omrl {

namespace {

constexpr char kCheckpointMagic[8] = {'O', 'M', 'R', 'L', 'C', 'K', 'P', 'T'};

template <typename T>
void write_pod(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw IoError("checkpoint: truncated file");
  return value;
}

void write_net(std::ostream& os, const Mlp<float>& net) {
  const auto& sizes = net.layer_sizes();
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(sizes.size()));
  for (int s : sizes) write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(s));
  for (Activation a : net.activations()) write_pod<std::uint8_t>(os, static_cast<std::uint8_t>(a));
  write_pod<float>(os, net.out_scale());
  for (int l = 0; l < net.layer_count(); ++l) {
    os.write(reinterpret_cast<const char*>(net.weights(l).data()),
             net.weights(l).size() * sizeof(float));
    os.write(reinterpret_cast<const char*>(net.biases(l).data()),
             net.biases(l).size() * sizeof(float));
  }
}

Mlp<float> read_net(std::istream& is) {
  const auto n_sizes = read_pod<std::uint32_t>(is);
  if (n_sizes < 2 || n_sizes > 64) throw IoError("checkpoint: implausible layer count");
  std::vector<int> sizes(n_sizes);
  for (auto& s : sizes) s = static_cast<int>(read_pod<std::uint32_t>(is));
  std::vector<Activation> acts(n_sizes - 1);
  for (auto& a : acts) a = static_cast<Activation>(read_pod<std::uint8_t>(is));
  const float scale = read_pod<float>(is);
  Mlp<float> net(sizes, acts, scale);
  for (int l = 0; l < net.layer_count(); ++l) {
    is.read(reinterpret_cast<char*>(net.weights(l).data()),
            net.weights(l).size() * sizeof(float));
    is.read(reinterpret_cast<char*>(net.biases(l).data()),
            net.biases(l).size() * sizeof(float));
    if (!is) throw IoError("checkpoint: truncated tensor data");
  }
  return net;
}

Eigen::MatrixXf vstack(const Eigen::MatrixXf& top, const Eigen::MatrixXf& bottom) {
  Eigen::MatrixXf out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

}  // namespace

void DdpgHyper::validate() const {
  if (epochs < 1) throw std::invalid_argument("rl.epochs must be >= 1");
  if (warmup_epochs < 0) throw std::invalid_argument("rl.warmup must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("rl.batch must be >= 1");
  if (tau < 0 || tau > 1) throw std::invalid_argument("rl.tau must be in [0, 1]");
  if (gamma_discount < 0 || gamma_discount > 1)
    throw std::invalid_argument("rl.gamma must be in [0, 1]");
  if (actor_lr <= 0 || critic_lr <= 0) throw std::invalid_argument("rl learning rates must be > 0");
  if (noise_sigma < 0) throw std::invalid_argument("rl.noise_sigma must be >= 0");
  if (noise_decay <= 0 || noise_decay > 1)
    throw std::invalid_argument("rl.noise_decay must be in (0, 1]");
  if (buffer_capacity < batch_size)
    throw std::invalid_argument("rl.capacity must be >= rl.batch");
  if (hidden1 < 1 || hidden2 < 1) throw std::invalid_argument("rl hidden sizes must be >= 1");
  if (checkpoint_every < 0) throw std::invalid_argument("rl.checkpoint_every must be >= 0");
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("replay capacity must be > 0");
}

void ReplayBuffer::push(Transition t) {
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(std::move(t));
}

void ReplayBuffer::sample(int batch, std::mt19937_64& rng, Batch& out) const {
  if (!can_sample(batch)) throw std::logic_error("replay buffer has fewer items than the batch");
  const int obs_dim = static_cast<int>(items_.front().obs->size());
  const int act_dim = static_cast<int>(items_.front().action.size());
  out.obs.resize(obs_dim, batch);
  out.next_obs.resize(obs_dim, batch);
  out.action.resize(act_dim, batch);
  out.reward.resize(1, batch);
  std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
  for (int b = 0; b < batch; ++b) {
    const Transition& t = items_[pick(rng)];
    out.obs.col(b) = *t.obs;
    out.next_obs.col(b) = *t.next_obs;
    out.action.col(b) = t.action;
    out.reward(0, b) = t.reward;
  }
}

UpdateLosses ddpg_update(Mlp<float>& actor, Mlp<float>& critic, Mlp<float>& target_actor,
                         Mlp<float>& target_critic, AdamOptimizer<float>& actor_opt,
                         AdamOptimizer<float>& critic_opt, const Batch& batch, float tau,
                         float gamma_discount, float actor_lr, float critic_lr) {
  const int b = static_cast<int>(batch.obs.cols());
  UpdateLosses losses;

  // critic regression target from the slow-moving networks
  const Eigen::MatrixXf next_action = target_actor.forward(batch.next_obs);
  const Eigen::MatrixXf next_q = target_critic.forward(vstack(batch.next_obs, next_action));
  const Eigen::MatrixXf y = batch.reward + gamma_discount * next_q;

  Eigen::MatrixXf q = critic.forward_cached(vstack(batch.obs, batch.action));
  Eigen::MatrixXf diff = q - y;
  losses.critic_loss = diff.squaredNorm() / b;
  critic.zero_grads();
  critic.backward((2.0f / b) * diff);
  critic_opt.step(critic, critic_lr);

  // actor ascent on Q(s, mu(s)); gradients flow through the critic input only
  const Eigen::MatrixXf a = actor.forward_cached(batch.obs);
  const Eigen::MatrixXf qa = critic.forward_cached(vstack(batch.obs, a));
  losses.actor_value = qa.mean();
  const Eigen::MatrixXf dq = Eigen::MatrixXf::Constant(1, b, -1.0f / b);
  const Eigen::MatrixXf dinput = critic.backward(dq, /*accumulate=*/false);
  actor.zero_grads();
  actor.backward(dinput.bottomRows(a.rows()));
  actor_opt.step(actor, actor_lr);

  soft_update(target_actor, actor, tau);
  soft_update(target_critic, critic, tau);
  return losses;
}

DdpgAgent::DdpgAgent(int obs_dim, int action_dim, double action_bound, const DdpgHyper& hyper,
                     std::mt19937_64& rng)
    : hyper_(hyper),
      obs_dim_(obs_dim),
      action_dim_(action_dim),
      bound_(action_bound),
      actor_({obs_dim, hyper.hidden1, hyper.hidden2, action_dim},
             {Activation::ReLU, Activation::ReLU, Activation::TanhBounded},
             static_cast<float>(action_bound)),
      critic_({obs_dim + action_dim, hyper.hidden1, hyper.hidden2, 1},
              {Activation::ReLU, Activation::ReLU, Activation::Linear}),
      buffer_(hyper.buffer_capacity) {
  hyper_.validate();
  actor_.init_uniform(rng);
  critic_.init_uniform(rng);
  target_actor_ = actor_;
  target_critic_ = critic_;
  actor_opt_ = AdamOptimizer<float>(actor_);
  critic_opt_ = AdamOptimizer<float>(critic_);
}

Eigen::VectorXd DdpgAgent::act(const Eigen::VectorXd& obs) const {
  const Eigen::MatrixXf out = actor_.forward(obs.cast<float>());
  return out.col(0).cast<double>();
}

Eigen::VectorXd DdpgAgent::act_noisy(const Eigen::VectorXd& obs, double sigma_abs,
                                     std::mt19937_64& rng) const {
  Eigen::VectorXd a = act(obs);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int i = 0; i < a.size(); ++i) a(i) += sigma_abs * noise(rng);
  return a.cwiseMax(-bound_).cwiseMin(bound_);
}

Eigen::VectorXd DdpgAgent::random_action(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> dist(-bound_, bound_);
  Eigen::VectorXd a(action_dim_);
  for (int i = 0; i < a.size(); ++i) a(i) = dist(rng);
  return a;
}

UpdateLosses DdpgAgent::update(std::mt19937_64& rng) {
  if (!ready()) throw std::logic_error("ddpg update with insufficient replay data");
  buffer_.sample(hyper_.batch_size, rng, batch_);
  return ddpg_update(actor_, critic_, target_actor_, target_critic_, actor_opt_, critic_opt_,
                     batch_, static_cast<float>(hyper_.tau),
                     static_cast<float>(hyper_.gamma_discount),
                     static_cast<float>(hyper_.actor_lr), static_cast<float>(hyper_.critic_lr));
}

void save_checkpoint(const std::string& path, const CheckpointMeta& meta,
                     const Mlp<float>& actor, const Mlp<float>& critic) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open checkpoint for writing: " + path);
  os.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  write_pod(os, meta.format_version);
  write_pod(os, meta.state_dim);
  write_pod(os, meta.action_dim);
  write_pod(os, meta.seed);
  write_pod(os, meta.action_bound);
  write_net(os, actor);
  write_net(os, critic);
  if (!os) throw IoError("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
    throw IoError("not a checkpoint file: " + path);
  Checkpoint ck;
  ck.meta.format_version = read_pod<std::uint32_t>(is);
  if (ck.meta.format_version != 1)
    throw IoError("unsupported checkpoint version in " + path);
  ck.meta.state_dim = read_pod<std::uint32_t>(is);
  ck.meta.action_dim = read_pod<std::uint32_t>(is);
  ck.meta.seed = read_pod<std::uint64_t>(is);
  ck.meta.action_bound = read_pod<double>(is);
  ck.actor = read_net(is);
  ck.critic = read_net(is);
  return ck;
}

TrainingReport train(Environment& env, const DdpgHyper& hyper, const std::string& checkpoint_dir,
                     const EpochCallback& on_epoch) {
  hyper.validate();
  const auto t_start = std::chrono::steady_clock::now();

  std::mt19937_64 rng(hyper.seed);
  DdpgAgent agent(env.obs_dim(), env.action_dim(), env.omega_max(), hyper, rng);

  TrainingReport report;
  report.seed = hyper.seed;
  report.best_schedule = env.executed_schedule();

  CheckpointMeta meta;
  meta.state_dim = static_cast<std::uint32_t>(env.model().dim());
  meta.action_dim = static_cast<std::uint32_t>(env.action_dim());
  meta.seed = hyper.seed;
  meta.action_bound = env.omega_max();

  const bool save = !checkpoint_dir.empty();
  if (save) std::filesystem::create_directories(checkpoint_dir);
  auto write_ckpt = [&](const std::string& name) {
    const std::string path = checkpoint_dir + "/" + name;
    save_checkpoint(path, meta, agent.actor(), agent.critic());
    report.checkpoint_paths.push_back(path);
    return path;
  };

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    const double sigma_abs =
        hyper.noise_sigma * env.omega_max() * std::pow(hyper.noise_decay, epoch);
    Eigen::VectorXd obs = env.reset();
    auto obs_ptr = std::make_shared<const Eigen::VectorXf>(obs.cast<float>());
    double episode_reward = 0.0;

    for (int s = 0; s < env.steps(); ++s) {
      const Eigen::VectorXd action = (epoch < hyper.warmup_epochs)
                                         ? agent.random_action(rng)
                                         : agent.act_noisy(obs, sigma_abs, rng);
      auto result = env.step(action);
      auto next_ptr = std::make_shared<const Eigen::VectorXf>(result.obs.cast<float>());
      agent.remember({obs_ptr, next_ptr, action.cast<float>(), static_cast<float>(result.reward)});
      episode_reward += result.reward;
      if (epoch >= hyper.warmup_epochs && agent.ready()) agent.update(rng);
      obs = std::move(result.obs);
      obs_ptr = std::move(next_ptr);
    }

    const double f = env.fidelity_now();
    report.epoch_fidelity.push_back(f);
    report.epoch_reward.push_back(episode_reward);
    report.noise_sigma.push_back(sigma_abs);
    if (f > report.best_fidelity_value) {
      report.best_fidelity_value = f;
      report.best_epoch = epoch;
      report.best_schedule = env.executed_schedule();
      if (save) write_ckpt("ckpt_best.bin");
    }
    report.best_fidelity.push_back(report.best_fidelity_value);
    report.epochs_run = epoch + 1;

    if (save && hyper.checkpoint_every > 0 && (epoch + 1) % hyper.checkpoint_every == 0) {
      char name[64];
      std::snprintf(name, sizeof(name), "ckpt_epoch%04d.bin", epoch + 1);
      write_ckpt(name);
    }
    if (on_epoch) on_epoch(epoch, report);
    if (report.best_fidelity_value >= hyper.stop_fidelity) break;
  }

  if (save) write_ckpt("ckpt_final.bin");
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

}  // namespace omrl
