#ifndef UED_ENVS_HPP
#define UED_ENVS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ued/level.hpp"

namespace ued {

using ActionId = int;

namespace maze_action {
inline constexpr ActionId kLeft = 0;
inline constexpr ActionId kRight = 1;
inline constexpr ActionId kForward = 2;
inline constexpr int kCount = 3;
}  // namespace maze_action

namespace fruit_action {
inline constexpr ActionId kKick = 0;
inline constexpr ActionId kForward = 1;
inline constexpr ActionId kEatApple = 2;
inline constexpr ActionId kEatBanana = 3;
inline constexpr int kCount = 4;
}  // namespace fruit_action

// Cell codes visible to the agent. Ice has no code.
enum ViewCode : std::uint8_t { kViewEmpty = 0, kViewWall = 1, kViewGoal = 2, kViewAgent = 3 };

enum class ObsMode { kEgocentric, kFullGrid };

struct EnvConfig {
  int maze_max_steps = 250;
  int fruit_max_steps = 100;
  double reward_apple = 3.0;
  double reward_banana = 10.0;
  ObsMode obs_mode = ObsMode::kEgocentric;
  int view_size = 5;
};

// What the agent sees. `codes` take values in [0, alphabet); `facing` is -1
// when the env has no heading.
struct Observation {
  std::vector<std::uint8_t> codes;
  int alphabet = 2;
  int facing = -1;
  bool operator==(const Observation&) const = default;
};

// Length of the flattened one-hot encoding of one observation.
std::size_t encoding_size(const Observation& obs);
void encode_observation(const Observation& obs, double* out);
std::vector<double> encode_observation(const Observation& obs);

// Encoding size for a kind/config without building an observation. Grid sizes
// matter only for the full-grid mode.
std::size_t observation_encoding_size(EnvKind kind, const EnvConfig& config,
                                      int width = 0, int height = 0);
int action_count(EnvKind kind);

struct StepInfo {
  bool reached_goal = false;
  std::optional<Fruit> ate_fruit;
  bool slid = false;
};

struct StepResult {
  Observation obs;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

// Full simulator state. Copyable so a second simulator can be synchronised
// with it.
struct EnvState {
  std::shared_ptr<const Level> level;
  std::uint64_t episode_seed = 0;
  int step_count = 0;
  bool done = false;

  Pos pos;
  int facing = kEast;
  // Active ice for this episode (may differ from the level under resampling).
  std::vector<std::uint8_t> ice;
  // Cells the agent has occupied, slide-through cells included.
  std::vector<std::uint8_t> visited;

  int room = 0;
  std::vector<int> kicks_remaining;
  Fruit correct_fruit = Fruit::kApple;

  bool operator==(const EnvState& other) const;
};

class Env {
 public:
  explicit Env(EnvConfig config = {}) : config_(config) {}

  const EnvConfig& config() const { return config_; }

  // Throws kInvalidLevel for a malformed level.
  Observation reset(const Level& level, std::uint64_t episode_seed);
  Observation reset(std::shared_ptr<const Level> level, std::uint64_t episode_seed);
  // Throws kEpisodeDone after a terminal step.
  StepResult step(ActionId action);

  const EnvState& state() const { return state_; }
  EnvState& mutable_state() { return state_; }
  void set_state(const EnvState& state) { state_ = state; }

  Observation observe() const;
  int max_steps() const;
  int action_count() const;

 private:
  StepResult step_maze(ActionId action);
  StepResult step_fruit(ActionId action);
  Observation observe_maze() const;
  Observation observe_fruit() const;

  EnvConfig config_;
  EnvState state_;
};

}  // namespace ued

#endif  // UED_ENVS_HPP
