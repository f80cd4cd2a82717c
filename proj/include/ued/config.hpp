#ifndef UED_CONFIG_HPP
#define UED_CONFIG_HPP

#include <string>

#include "ued/curricula.hpp"

namespace ued {

struct EvalConfig {
  std::string suite;  // path; empty means held-out DR levels
  int episodes_per_level = 1;
  int heldout_levels = 20;
};

struct ExperimentConfig {
  TrainerConfig trainer;
  std::uint64_t total_student_updates = 100;
  std::uint64_t max_iterations = 0;  // 0: no cap
  std::uint64_t eval_interval = 100;
  std::uint64_t master_seed = 0;
  std::string output_dir = "runs/default";
  EvalConfig eval;
  bool log_wallclock = false;

  void validate() const;
};

// Strict parser: unknown keys and type errors raise kConfigInvalid naming
// the offending field.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
// Full config with every default filled in; parses back to the same config.
std::string config_to_json(const ExperimentConfig& config);

const char* config_schema();

}  // namespace ued

#endif  // UED_CONFIG_HPP
