#ifndef UED_PPO_HPP
#define UED_PPO_HPP

#include <optional>
#include <span>
#include <vector>

#include "ued/policy.hpp"

namespace ued {

enum class OptimizerKind { kAdam, kSgd };

struct PPOConfig {
  double gamma = 0.995;
  double gae_lambda = 0.95;
  double clip_eps = 0.2;
  int epochs = 5;
  int minibatches = 1;
  double learning_rate = 1e-3;
  double value_coef = 0.5;
  double entropy_coef = 0.0;
  double max_grad_norm = 0.5;
  int rollout_length = 256;
  bool clip_value = false;
  bool normalize_advantages = true;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-5;

  void validate() const;  // throws kConfigInvalid
};

// One episode (or rollout segment) of per-step records.
struct Trajectory {
  std::vector<Eigen::VectorXd> obs;  // encoded (frame-stacked) observations
  std::vector<int> actions;
  std::vector<double> log_probs;
  std::vector<double> rewards;
  std::vector<double> values;
  std::vector<std::uint8_t> dones;
  double bootstrap_value = 0.0;
  // Optional explicit V(s_{t+1}) per step; used when next states do not
  // follow the stored sequence (fictitious transitions).
  std::vector<double> next_values;
  // Optional per-step action distributions, needed by classifier-style scores.
  std::vector<Eigen::VectorXd> dists;
  std::uint64_t level_id = 0;
  double episode_return = 0.0;

  std::size_t size() const { return rewards.size(); }
  void validate() const;
};

struct Advantages {
  std::vector<double> advantages;
  std::vector<double> returns;
};

// Backward recursion A_t = delta_t + gamma*lambda*(1-done_t)*A_{t+1}.
std::vector<double> td_errors(const Trajectory& traj, double gamma);
Advantages compute_gae(const Trajectory& traj, double gamma, double lambda);

// Flattened training batch.
struct Batch {
  Eigen::MatrixXd obs;
  std::vector<int> actions;
  Eigen::VectorXd old_log_probs;
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;
  Eigen::VectorXd old_values;

  Eigen::Index size() const { return obs.rows(); }
  Batch subset(std::span<const Eigen::Index> rows) const;
};

Batch build_batch(std::span<const Trajectory> trajectories, const PPOConfig& cfg);
// Mean 0, std 1; std floored at 1e-8.
void normalize_advantages(Eigen::VectorXd& advantages);

struct LossParts {
  double total = 0.0;
  double policy = 0.0;  // -J_clip
  double value = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
};

// Loss closure (heads + gradient) for a minibatch.
LossClosure ppo_loss_closure(const Batch& minibatch, const PPOConfig& cfg);
LossParts ppo_loss_parts(const PolicyParams& params, const Batch& minibatch, const PPOConfig& cfg);
double ppo_loss(const PolicyParams& params, const Batch& minibatch, const PPOConfig& cfg);

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  std::uint64_t t = 0;
};

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  double grad_norm = 0.0;
  int gradient_steps = 0;
};

// Clips `g` to max_norm in place and returns the pre-clip norm.
double clip_grad_norm(Eigen::VectorXd& g, double max_norm);

// epochs x minibatches clipped-gradient steps; minibatches are drawn without
// replacement from a per-epoch shuffle.
UpdateStats ppo_update(PolicyParams& params, AdamState& opt, const Batch& batch,
                       const PPOConfig& cfg, Rng& rng);

}  // namespace ued

#endif  // UED_PPO_HPP
