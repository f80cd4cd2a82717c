#ifndef UED_METRICS_HPP
#define UED_METRICS_HPP

#include <span>
#include <string>
#include <vector>

#include "ued/envs.hpp"
#include "ued/policy.hpp"
#include "ued/rollout.hpp"

namespace ued {

// Number of codes emitted by LZW with the dictionary seeded with every
// symbol. Throws kEmptySequence.
std::size_t lzw_complexity(std::span<const int> sequence);

struct NamedLevel {
  std::string name;
  Level level;
};

struct EvalSuite {
  std::string name;
  std::vector<NamedLevel> levels;
};

// Suite file: {"name": ..., "levels": [entry...]} where an entry is one of
//   {"name", "rows": ["#####", ...], "facing"?}
//   {"name", "level": <level json>}
//   {"name", "procedural": "perfect_maze", "count", "width", "height", "seed"}
EvalSuite load_suite(const std::string& path);
EvalSuite parse_suite(const std::string& text);

struct LevelReport {
  std::string name;
  double solved_rate = 0.0;
  double mean_return = 0.0;
};

struct EvalReport {
  std::vector<LevelReport> levels;
  double mean_solved_rate = 0.0;
  double median_solved_rate = 0.0;
  double mean_return = 0.0;
  double median_return = 0.0;

  std::string to_json() const;
  std::string to_csv() const;
};

// Greedy evaluation. Episode seeds depend only on (seed, level, episode).
EvalReport evaluate(const PolicyParams& params, int frame_stack, const EvalSuite& suite,
                    int episodes_per_level, const EnvConfig& env, std::uint64_t seed);
// Same protocol for an arbitrary actor (oracle, random).
EvalReport evaluate_actor(Actor& actor, const EvalSuite& suite, int episodes_per_level,
                          const EnvConfig& env, std::uint64_t seed);

// mean(train) - mean(test).
double generalization_gap(std::span<const double> train_returns,
                          std::span<const double> test_returns);

}  // namespace ued

#endif  // UED_METRICS_HPP
