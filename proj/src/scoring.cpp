#include "ued/scoring.hpp"

#include <algorithm>
#include <cmath>

namespace ued {

std::string_view score_kind_name(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kPolicyEntropy: return "policy_entropy";
    case ScoreKind::kMinMargin: return "min_margin";
    case ScoreKind::kLeastConfidence: return "least_confidence";
    case ScoreKind::kOneStepTD: return "one_step_td";
    case ScoreKind::kGAE: return "gae";
    case ScoreKind::kL1ValueLoss: return "l1_value_loss";
    case ScoreKind::kPVL: return "pvl";
    case ScoreKind::kMaxMC: return "max_mc";
  }
  return "pvl";
}

ScoreKind score_kind_from_name(std::string_view name) {
  for (ScoreKind k : {ScoreKind::kPolicyEntropy, ScoreKind::kMinMargin, ScoreKind::kLeastConfidence,
                      ScoreKind::kOneStepTD, ScoreKind::kGAE, ScoreKind::kL1ValueLoss,
                      ScoreKind::kPVL, ScoreKind::kMaxMC}) {
    if (score_kind_name(k) == name) return k;
  }
  throw UedError(ErrorCode::kConfigInvalid, "unknown score kind '" + std::string(name) + "'");
}

namespace {

double mean_over_dists(const Trajectory& traj, double (*per_step)(const Eigen::VectorXd&)) {
  if (traj.dists.size() != traj.size() || traj.dists.empty()) {
    throw UedError(ErrorCode::kMissingDistributions,
                   "classifier-style score needs one action distribution per step");
  }
  double total = 0.0;
  for (const auto& d : traj.dists) total += per_step(d);
  return total / static_cast<double>(traj.dists.size());
}

double step_entropy(const Eigen::VectorXd& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) h -= p[i] * std::log(p[i]);
  }
  return h;
}

double step_min_margin(const Eigen::VectorXd& p) {
  if (p.size() < 2) return 0.0;
  Eigen::Index best = 0;
  const double top = p.maxCoeff(&best);
  double second = -1.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i != best) second = std::max(second, p[i]);
  }
  return top - second;
}

double step_least_confidence(const Eigen::VectorXd& p) { return 1.0 - p.maxCoeff(); }

}  // namespace

double score_trajectory(const Trajectory& traj, const ScoreParams& params,
                        std::optional<double> level_max_return) {
  const std::size_t n = traj.size();
  switch (params.kind) {
    case ScoreKind::kPolicyEntropy: return mean_over_dists(traj, step_entropy);
    case ScoreKind::kMinMargin: return mean_over_dists(traj, step_min_margin);
    case ScoreKind::kLeastConfidence: return mean_over_dists(traj, step_least_confidence);
    default: break;
  }
  if (params.kind == ScoreKind::kMaxMC) {
    if (!level_max_return) {
      throw UedError(ErrorCode::kMissingMaxReturn, "MaxMC needs the level's maximum return");
    }
    if (n == 0) return 0.0;
    if (params.max_mc_dense) return *level_max_return - traj.values.front();
    double total = 0.0;
    for (double v : traj.values) total += *level_max_return - v;
    return total / static_cast<double>(n);
  }
  if (n == 0) return 0.0;
  const std::vector<double> delta = td_errors(traj, params.gamma);
  if (params.kind == ScoreKind::kOneStepTD) {
    double total = 0.0;
    for (double d : delta) total += std::abs(d);
    return total / static_cast<double>(n);
  }
  const Advantages adv = compute_gae(traj, params.gamma, params.lambda);
  double total = 0.0;
  for (double a : adv.advantages) {
    switch (params.kind) {
      case ScoreKind::kGAE: total += a; break;
      case ScoreKind::kL1ValueLoss: total += std::abs(a); break;
      case ScoreKind::kPVL: total += std::max(a, 0.0); break;
      default: break;
    }
  }
  return total / static_cast<double>(n);
}

}  // namespace ued
