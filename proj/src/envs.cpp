#include "ued/envs.hpp"

#include <algorithm>
#include <cstring>

namespace ued {

namespace {

constexpr int kMazeAlphabet = 3;      // empty, wall, goal
constexpr int kFullGridAlphabet = 4;  // empty, wall, goal, agent
constexpr int kFruitFlags = (kMaxRooms + 1) + 4;

}  // namespace

std::size_t encoding_size(const Observation& obs) {
  const std::size_t per_code = obs.alphabet == 2 ? 1 : static_cast<std::size_t>(obs.alphabet);
  return obs.codes.size() * per_code + (obs.facing >= 0 ? 4 : 0);
}

void encode_observation(const Observation& obs, double* out) {
  const std::size_t n = encoding_size(obs);
  std::fill(out, out + n, 0.0);
  std::size_t offset = 0;
  if (obs.alphabet == 2) {
    for (auto c : obs.codes) out[offset++] = c ? 1.0 : 0.0;
  } else {
    for (auto c : obs.codes) {
      out[offset + c] = 1.0;
      offset += static_cast<std::size_t>(obs.alphabet);
    }
  }
  if (obs.facing >= 0) out[offset + static_cast<std::size_t>(obs.facing)] = 1.0;
}

std::vector<double> encode_observation(const Observation& obs) {
  std::vector<double> out(encoding_size(obs));
  encode_observation(obs, out.data());
  return out;
}

std::size_t observation_encoding_size(EnvKind kind, const EnvConfig& config,
                                      int width, int height) {
  if (kind == EnvKind::kFruitChoice) return kFruitFlags;
  if (config.obs_mode == ObsMode::kFullGrid) {
    return static_cast<std::size_t>(width * height * kFullGridAlphabet + 4);
  }
  return static_cast<std::size_t>(config.view_size * config.view_size * kMazeAlphabet + 4);
}

int action_count(EnvKind kind) {
  return kind == EnvKind::kFruitChoice ? fruit_action::kCount : maze_action::kCount;
}

bool EnvState::operator==(const EnvState& other) const {
  const bool same_level = (level == other.level) ||
                          (level && other.level && *level == *other.level);
  return same_level && episode_seed == other.episode_seed &&
         step_count == other.step_count && done == other.done &&
         pos == other.pos && facing == other.facing && ice == other.ice &&
         visited == other.visited && room == other.room &&
         kicks_remaining == other.kicks_remaining &&
         correct_fruit == other.correct_fruit;
}

Observation Env::reset(const Level& level, std::uint64_t episode_seed) {
  return reset(std::make_shared<const Level>(level), episode_seed);
}

Observation Env::reset(std::shared_ptr<const Level> level,
                       std::uint64_t episode_seed) {
  validate_level(*level);
  state_ = EnvState{};
  state_.level = std::move(level);
  state_.episode_seed = episode_seed;
  const Level& lv = *state_.level;
  if (lv.is_grid()) {
    state_.pos = lv.agent;
    state_.facing = lv.facing;
    state_.visited.assign(lv.cells.size(), 0);
    state_.visited[lv.index(lv.agent)] = 1;
    if (lv.kind == EnvKind::kIcyMaze) state_.ice = lv.ice;
  } else {
    state_.room = 0;
    state_.kicks_remaining = lv.door_kick_counts;
    state_.correct_fruit = lv.correct_fruit;
  }
  return observe();
}

int Env::max_steps() const {
  return state_.level && state_.level->kind == EnvKind::kFruitChoice
             ? config_.fruit_max_steps
             : config_.maze_max_steps;
}

int Env::action_count() const {
  return state_.level ? ued::action_count(state_.level->kind) : maze_action::kCount;
}

StepResult Env::step(ActionId action) {
  if (!state_.level) throw UedError(ErrorCode::kEpisodeDone, "step before reset");
  if (state_.done) throw UedError(ErrorCode::kEpisodeDone, "step after terminal");
  if (action < 0 || action >= action_count()) {
    throw UedError(ErrorCode::kDimensionMismatch, "action id out of range");
  }
  return state_.level->is_grid() ? step_maze(action) : step_fruit(action);
}

StepResult Env::step_maze(ActionId action) {
  const Level& lv = *state_.level;
  StepResult result;
  state_.step_count += 1;
  if (action == maze_action::kLeft) {
    state_.facing = (state_.facing + 3) % 4;
  } else if (action == maze_action::kRight) {
    state_.facing = (state_.facing + 1) % 4;
  } else {
    const Pos d = facing_delta(state_.facing);
    const Pos next{state_.pos.x + d.x, state_.pos.y + d.y};
    // Blocked moves leave the agent in place and still consume the step.
    if (!lv.is_wall(next)) {
      state_.pos = next;
      state_.visited[lv.index(next)] = 1;
      if (next != lv.goal && lv.kind == EnvKind::kIcyMaze &&
          state_.ice[lv.index(next)] != 0) {
        const Pos beyond{next.x + d.x, next.y + d.y};
        if (!lv.is_wall(beyond)) {
          state_.pos = beyond;
          state_.visited[lv.index(beyond)] = 1;
          result.info.slid = true;
        }
      }
    }
  }
  const int max_steps = config_.maze_max_steps;
  if (state_.step_count >= max_steps) {
    state_.done = true;
  } else if (state_.pos == lv.goal) {
    state_.done = true;
    result.info.reached_goal = true;
    result.reward = 1.0 - 0.9 * (static_cast<double>(state_.step_count) / max_steps);
  }
  result.done = state_.done;
  result.obs = observe();
  return result;
}

StepResult Env::step_fruit(ActionId action) {
  const Level& lv = *state_.level;
  StepResult result;
  state_.step_count += 1;
  const bool in_fruit_room = state_.room == lv.room_count;
  switch (action) {
    case fruit_action::kKick:
      if (!in_fruit_room && state_.kicks_remaining[state_.room] > 0) {
        state_.kicks_remaining[state_.room] -= 1;
      }
      break;
    case fruit_action::kForward:
      if (!in_fruit_room && state_.kicks_remaining[state_.room] == 0) {
        state_.room += 1;
      }
      break;
    case fruit_action::kEatApple:
    case fruit_action::kEatBanana:
      if (in_fruit_room) {
        const Fruit eaten =
            action == fruit_action::kEatApple ? Fruit::kApple : Fruit::kBanana;
        result.info.ate_fruit = eaten;
        if (eaten == state_.correct_fruit) {
          result.reward = eaten == Fruit::kApple ? config_.reward_apple
                                                 : config_.reward_banana;
        }
        state_.done = true;
      }
      break;
    default:
      break;
  }
  if (!state_.done && state_.step_count >= config_.fruit_max_steps) {
    state_.done = true;
  }
  result.done = state_.done;
  result.obs = observe();
  return result;
}

Observation Env::observe() const {
  return state_.level->is_grid() ? observe_maze() : observe_fruit();
}

Observation Env::observe_maze() const {
  const Level& lv = *state_.level;
  Observation obs;
  obs.facing = state_.facing;
  if (config_.obs_mode == ObsMode::kFullGrid) {
    obs.alphabet = kFullGridAlphabet;
    obs.codes.resize(lv.cells.size());
    for (int y = 0; y < lv.height; ++y) {
      for (int x = 0; x < lv.width; ++x) {
        const Pos p{x, y};
        std::uint8_t code = lv.cell(p) == Cell::kWall ? kViewWall : kViewEmpty;
        if (p == lv.goal) code = kViewGoal;
        if (p == state_.pos) code = kViewAgent;
        obs.codes[lv.index(p)] = code;
      }
    }
    return obs;
  }
  // Egocentric K x K view: the agent sits at the bottom-centre row looking
  // "up" the view, which covers the cells ahead of it and beside it.
  const int k = config_.view_size;
  obs.alphabet = kMazeAlphabet;
  obs.codes.resize(static_cast<std::size_t>(k * k));
  const Pos fwd = facing_delta(state_.facing);
  const Pos right = facing_delta((state_.facing + 1) % 4);
  for (int row = 0; row < k; ++row) {
    const int ahead = k - 1 - row;
    for (int col = 0; col < k; ++col) {
      const int lateral = col - k / 2;
      const Pos p{state_.pos.x + fwd.x * ahead + right.x * lateral,
                  state_.pos.y + fwd.y * ahead + right.y * lateral};
      std::uint8_t code = kViewWall;
      if (lv.in_bounds(p)) {
        if (p == lv.goal) code = kViewGoal;
        else if (lv.cell(p) == Cell::kEmpty) code = kViewEmpty;
      }
      obs.codes[static_cast<std::size_t>(row * k + col)] = code;
    }
  }
  return obs;
}

Observation Env::observe_fruit() const {
  const Level& lv = *state_.level;
  Observation obs;
  obs.alphabet = 2;
  obs.codes.assign(kFruitFlags, 0);
  obs.codes[static_cast<std::size_t>(state_.room)] = 1;
  const bool in_fruit_room = state_.room == lv.room_count;
  const std::size_t base = kMaxRooms + 1;
  if (!in_fruit_room) {
    obs.codes[base + 0] = 1;  // door present
    obs.codes[base + 1] = state_.kicks_remaining[state_.room] == 0 ? 1 : 0;
  } else {
    obs.codes[base + 2] = 1;  // apple visible
    obs.codes[base + 3] = 1;  // banana visible
  }
  return obs;
}

}  // namespace ued
