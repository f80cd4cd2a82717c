#ifndef UED_HARNESS_HPP
#define UED_HARNESS_HPP

#include <string>
#include <vector>

#include "ued/config.hpp"
#include "ued/metrics.hpp"

namespace ued {

inline constexpr int kMetricsSchemaVersion = 1;

// metrics.csv header for a curriculum/env combination.
std::vector<std::string> metrics_columns(CurriculumKind kind, EnvKind env);

// Default evaluation suite: DR levels drawn from a stream no training
// component uses.
EvalSuite heldout_suite(const ExperimentConfig& config);
EvalSuite resolve_suite(const ExperimentConfig& config);

struct RunSummary {
  std::uint64_t iterations = 0;
  std::uint64_t student_updates = 0;
  std::string output_dir;
  EvalReport final_eval;
};

// Runs the experiment into config.output_dir. With `resume`, continues from
// the newest checkpoint in that directory (a fresh start if there is none).
RunSummary run(const ExperimentConfig& config, bool resume = false);

// Companion state file of a checkpoint (iter_N.ckpt -> iter_N.state.json).
std::string state_path_for(const std::string& checkpoint_path);

}  // namespace ued

#endif  // UED_HARNESS_HPP
