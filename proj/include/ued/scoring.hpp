#ifndef UED_SCORING_HPP
#define UED_SCORING_HPP

#include <optional>
#include <string_view>

#include "ued/ppo.hpp"

namespace ued {

enum class ScoreKind {
  kPolicyEntropy,
  kMinMargin,
  kLeastConfidence,
  kOneStepTD,
  kGAE,
  kL1ValueLoss,
  kPVL,
  kMaxMC,
};

// Stable snake_case config names.
std::string_view score_kind_name(ScoreKind kind);
ScoreKind score_kind_from_name(std::string_view name);

struct ScoreParams {
  ScoreKind kind = ScoreKind::kPVL;
  double gamma = 0.995;
  double lambda = 0.95;
  // MaxMC: R_max - V(s_0) instead of the per-step average.
  bool max_mc_dense = false;
};

// Pure function of the trajectory. Classifier-style kinds read traj.dists
// (kMissingDistributions when absent); MaxMC needs the level's best return
// (kMissingMaxReturn when absent).
double score_trajectory(const Trajectory& traj, const ScoreParams& params,
                        std::optional<double> level_max_return = std::nullopt);

}  // namespace ued

#endif  // UED_SCORING_HPP
