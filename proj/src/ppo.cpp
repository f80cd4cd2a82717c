#include "ued/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ued {

void PPOConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw UedError(ErrorCode::kConfigInvalid, "ppo." + what);
  };
  if (!(gamma > 0.0 && gamma <= 1.0)) fail("gamma must be in (0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) fail("gae_lambda must be in [0, 1]");
  if (!(clip_eps > 0.0)) fail("clip_eps must be positive");
  if (epochs < 1) fail("epochs must be >= 1");
  if (minibatches < 1) fail("minibatches must be >= 1");
  if (!(learning_rate >= 0.0)) fail("learning_rate must be >= 0");
  if (!(value_coef >= 0.0)) fail("value_coef must be >= 0");
  if (!(entropy_coef >= 0.0)) fail("entropy_coef must be >= 0");
  if (!(max_grad_norm > 0.0)) fail("max_grad_norm must be positive");
  if (rollout_length < 1) fail("rollout_length must be >= 1");
}

void Trajectory::validate() const {
  const std::size_t n = rewards.size();
  if (obs.size() != n || actions.size() != n || log_probs.size() != n ||
      values.size() != n || dones.size() != n) {
    throw UedError(ErrorCode::kDimensionMismatch, "trajectory arrays have unequal lengths");
  }
  if (!next_values.empty() && next_values.size() != n) {
    throw UedError(ErrorCode::kDimensionMismatch, "next_values length mismatch");
  }
  if (!dists.empty() && dists.size() != n) {
    throw UedError(ErrorCode::kDimensionMismatch, "dists length mismatch");
  }
}

namespace {

double next_value(const Trajectory& traj, std::size_t t) {
  if (!traj.next_values.empty()) return traj.next_values[t];
  return t + 1 < traj.size() ? traj.values[t + 1] : traj.bootstrap_value;
}

}  // namespace

std::vector<double> td_errors(const Trajectory& traj, double gamma) {
  std::vector<double> delta(traj.size());
  for (std::size_t t = 0; t < traj.size(); ++t) {
    const double nonterminal = traj.dones[t] ? 0.0 : 1.0;
    delta[t] = traj.rewards[t] + gamma * next_value(traj, t) * nonterminal - traj.values[t];
  }
  return delta;
}

Advantages compute_gae(const Trajectory& traj, double gamma, double lambda) {
  const std::vector<double> delta = td_errors(traj, gamma);
  Advantages out;
  out.advantages.resize(traj.size());
  out.returns.resize(traj.size());
  double running = 0.0;
  for (std::size_t t = traj.size(); t-- > 0;) {
    const double nonterminal = traj.dones[t] ? 0.0 : 1.0;
    running = delta[t] + gamma * lambda * nonterminal * running;
    out.advantages[t] = running;
    out.returns[t] = running + traj.values[t];
  }
  return out;
}

Batch Batch::subset(std::span<const Eigen::Index> rows) const {
  Batch b;
  const auto n = static_cast<Eigen::Index>(rows.size());
  b.obs.resize(n, obs.cols());
  b.old_log_probs.resize(n);
  b.advantages.resize(n);
  b.returns.resize(n);
  b.old_values.resize(n);
  b.actions.resize(rows.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = rows[static_cast<std::size_t>(i)];
    b.obs.row(i) = obs.row(r);
    b.actions[static_cast<std::size_t>(i)] = actions[static_cast<std::size_t>(r)];
    b.old_log_probs[i] = old_log_probs[r];
    b.advantages[i] = advantages[r];
    b.returns[i] = returns[r];
    b.old_values[i] = old_values[r];
  }
  return b;
}

void normalize_advantages(Eigen::VectorXd& advantages) {
  if (advantages.size() == 0) return;
  const double mean = advantages.mean();
  const double var = (advantages.array() - mean).square().mean();
  const double std = std::max(std::sqrt(var), 1e-8);
  advantages = ((advantages.array() - mean) / std).matrix();
}

Batch build_batch(std::span<const Trajectory> trajectories, const PPOConfig& cfg) {
  std::size_t total = 0;
  Eigen::Index width = 0;
  for (const auto& tr : trajectories) {
    tr.validate();
    total += tr.size();
    if (tr.size() > 0) width = tr.obs.front().size();
  }
  Batch b;
  const auto n = static_cast<Eigen::Index>(total);
  b.obs.resize(n, width);
  b.old_log_probs.resize(n);
  b.advantages.resize(n);
  b.returns.resize(n);
  b.old_values.resize(n);
  b.actions.reserve(total);
  Eigen::Index row = 0;
  for (const auto& tr : trajectories) {
    const Advantages adv = compute_gae(tr, cfg.gamma, cfg.gae_lambda);
    for (std::size_t t = 0; t < tr.size(); ++t, ++row) {
      if (tr.obs[t].size() != width) {
        throw UedError(ErrorCode::kDimensionMismatch, "observation widths differ within batch");
      }
      b.obs.row(row) = tr.obs[t].transpose();
      b.actions.push_back(tr.actions[t]);
      b.old_log_probs[row] = tr.log_probs[t];
      b.advantages[row] = adv.advantages[t];
      b.returns[row] = adv.returns[t];
      b.old_values[row] = tr.values[t];
    }
  }
  if (cfg.normalize_advantages) normalize_advantages(b.advantages);
  return b;
}

namespace {

// Evaluates the loss pieces and, when `head` is non-null, the gradients with
// respect to logits and values.
LossParts evaluate_heads(const BatchForward& fw, const Batch& mb, const PPOConfig& cfg,
                         HeadLoss* head) {
  const Eigen::Index n = mb.size();
  const Eigen::Index a_count = fw.logits.cols();
  LossParts parts;
  if (head) {
    head->dlogits = Eigen::MatrixXd::Zero(n, a_count);
    head->dvalues = Eigen::VectorXd::Zero(n);
  }
  if (n == 0) return parts;
  const double inv_n = 1.0 / static_cast<double>(n);
  double clipped = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd logp = log_softmax(fw.logits.row(i).transpose());
    const Eigen::VectorXd p = logp.array().exp().matrix();
    const int action = mb.actions[static_cast<std::size_t>(i)];
    const double log_ratio = logp[action] - mb.old_log_probs[i];
    const double ratio = std::exp(log_ratio);
    const double adv = mb.advantages[i];
    const double clipped_ratio = std::clamp(ratio, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps);
    const double unclipped_obj = ratio * adv;
    const double clipped_obj = clipped_ratio * adv;
    const double objective = std::min(unclipped_obj, clipped_obj);
    parts.policy -= objective * inv_n;
    if (std::abs(ratio - 1.0) > cfg.clip_eps) clipped += 1.0;
    parts.approx_kl += -log_ratio * inv_n;

    // d objective / d log pi(a): ratio*adv on the active unclipped branch.
    double dobj_dlogp = 0.0;
    if (unclipped_obj <= clipped_obj || (ratio >= 1.0 - cfg.clip_eps && ratio <= 1.0 + cfg.clip_eps)) {
      dobj_dlogp = ratio * adv;
    }

    const double h = -(p.array() * logp.array()).sum();
    parts.entropy += h * inv_n;

    const double v = fw.values[i];
    const double target = mb.returns[i];
    double vloss = 0.5 * (v - target) * (v - target);
    double dv = v - target;
    if (cfg.clip_value) {
      const double v_clipped =
          mb.old_values[i] + std::clamp(v - mb.old_values[i], -cfg.clip_eps, cfg.clip_eps);
      const double vloss_clipped = 0.5 * (v_clipped - target) * (v_clipped - target);
      if (vloss_clipped > vloss) {
        vloss = vloss_clipped;
        const bool inside = std::abs(v - mb.old_values[i]) < cfg.clip_eps;
        dv = inside ? (v_clipped - target) : 0.0;
      }
    }
    parts.value += vloss * inv_n;

    if (head) {
      // Policy term: -dobj/dlogits = -dobj_dlogp * (onehot - p).
      for (Eigen::Index j = 0; j < a_count; ++j) {
        const double onehot = j == action ? 1.0 : 0.0;
        double g = -dobj_dlogp * (onehot - p[j]);
        // Entropy term: d(-c*H)/dz_j = c * p_j * (log p_j + H).
        g += cfg.entropy_coef * p[j] * (logp[j] + h);
        head->dlogits(i, j) = g * inv_n;
      }
      head->dvalues[i] = cfg.value_coef * dv * inv_n;
    }
  }
  parts.clip_fraction = clipped * inv_n;
  parts.total = parts.policy + cfg.value_coef * parts.value - cfg.entropy_coef * parts.entropy;
  if (head) head->loss = parts.total;
  return parts;
}

}  // namespace

LossClosure ppo_loss_closure(const Batch& minibatch, const PPOConfig& cfg) {
  LossClosure closure;
  closure.obs = minibatch.obs;
  closure.heads = [mb = minibatch, cfg](const BatchForward& fw) {
    HeadLoss head;
    evaluate_heads(fw, mb, cfg, &head);
    return head;
  };
  return closure;
}

LossParts ppo_loss_parts(const PolicyParams& params, const Batch& minibatch, const PPOConfig& cfg) {
  const BatchForward fw = forward_batch(params, minibatch.obs);
  LossParts parts = evaluate_heads(fw, minibatch, cfg, nullptr);
  if (!std::isfinite(parts.total)) {
    throw UedError(ErrorCode::kNonFiniteLoss, "PPO loss is not finite");
  }
  return parts;
}

double ppo_loss(const PolicyParams& params, const Batch& minibatch, const PPOConfig& cfg) {
  return ppo_loss_parts(params, minibatch, cfg).total;
}

double clip_grad_norm(Eigen::VectorXd& g, double max_norm) {
  const double norm = g.norm();
  if (norm > max_norm) g *= max_norm / norm;
  return norm;
}

UpdateStats ppo_update(PolicyParams& params, AdamState& opt, const Batch& batch,
                       const PPOConfig& cfg, Rng& rng) {
  UpdateStats stats;
  const Eigen::Index n = batch.size();
  if (n == 0) return stats;
  if (opt.m.size() != params.theta.size()) {
    opt.m = Eigen::VectorXd::Zero(params.theta.size());
    opt.v = Eigen::VectorXd::Zero(params.theta.size());
    opt.t = 0;
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  const auto minibatches = std::min<Eigen::Index>(cfg.minibatches, n);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[uniform_index(rng, i)]);
    }
    for (Eigen::Index m = 0; m < minibatches; ++m) {
      // Near-equal contiguous chunks of the shuffled order.
      const Eigen::Index begin = m * n / minibatches;
      const Eigen::Index end = (m + 1) * n / minibatches;
      const std::span<const Eigen::Index> rows(order.data() + begin,
                                               static_cast<std::size_t>(end - begin));
      const Batch mb = batch.subset(rows);
      LossParts parts;
      LossClosure closure;
      closure.obs = mb.obs;
      closure.heads = [&](const BatchForward& fw) {
        HeadLoss head;
        parts = evaluate_heads(fw, mb, cfg, &head);
        return head;
      };
      GradResult g = grad(params, closure);
      stats.grad_norm += clip_grad_norm(g.grad, cfg.max_grad_norm);
      if (cfg.optimizer == OptimizerKind::kSgd) {
        params.theta -= cfg.learning_rate * g.grad;
      } else {
        opt.t += 1;
        opt.m = cfg.adam_beta1 * opt.m + (1.0 - cfg.adam_beta1) * g.grad;
        opt.v = cfg.adam_beta2 * opt.v + (1.0 - cfg.adam_beta2) * g.grad.cwiseProduct(g.grad);
        const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(opt.t));
        const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(opt.t));
        params.theta.array() -= cfg.learning_rate * (opt.m.array() / bc1) /
                                ((opt.v.array() / bc2).sqrt() + cfg.adam_eps);
      }
      stats.policy_loss += parts.policy;
      stats.value_loss += parts.value;
      stats.entropy += parts.entropy;
      stats.clip_fraction += parts.clip_fraction;
      stats.approx_kl += parts.approx_kl;
      stats.gradient_steps += 1;
    }
  }
  const double k = static_cast<double>(stats.gradient_steps);
  stats.policy_loss /= k;
  stats.value_loss /= k;
  stats.entropy /= k;
  stats.clip_fraction /= k;
  stats.approx_kl /= k;
  stats.grad_norm /= k;
  return stats;
}

}  // namespace ued
