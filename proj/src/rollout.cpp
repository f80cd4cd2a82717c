#include "ued/rollout.hpp"

#include <deque>

namespace ued {

FrameStack::FrameStack(std::size_t frame_dim, int frames)
    : frame_dim_(frame_dim),
      frames_(frames),
      stacked_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(frame_dim * static_cast<std::size_t>(frames)))) {}

void FrameStack::reset(const Observation& obs) {
  stacked_.setZero();
  encode_observation(obs, stacked_.data());
}

void FrameStack::push(const Observation& obs) {
  const auto dim = static_cast<Eigen::Index>(frame_dim_);
  for (int f = frames_ - 1; f > 0; --f) {
    stacked_.segment(f * dim, dim) = stacked_.segment((f - 1) * dim, dim);
  }
  encode_observation(obs, stacked_.data());
}

EpisodeResult collect_episode(const PolicyParams& params, Env& env,
                              std::shared_ptr<const Level> level, std::uint64_t episode_seed,
                              Rng& rng, const RolloutOptions& options) {
  EpisodeResult result;
  Observation obs = env.reset(std::move(level), episode_seed);
  FrameStack stack(encoding_size(obs), options.frame_stack);
  stack.reset(obs);
  Trajectory& tr = result.traj;
  tr.level_id = 0;
  for (;;) {
    const ForwardOut out = forward(params, stack.stacked());
    const ActionSample a = options.greedy ? greedy_action(out) : sample_action(out, rng);
    tr.obs.push_back(stack.stacked());
    tr.actions.push_back(a.action);
    tr.log_probs.push_back(a.log_prob);
    tr.values.push_back(out.value);
    if (options.record_dists) tr.dists.push_back(softmax(out.logits));
    const StepResult step = env.step(a.action);
    tr.rewards.push_back(step.reward);
    tr.dones.push_back(step.done ? 1 : 0);
    result.actions.push_back(a.action);
    result.episode_return += step.reward;
    if (step.info.reached_goal) result.solved = true;
    if (step.info.ate_fruit) {
      result.ate_fruit = step.info.ate_fruit;
      result.solved = step.reward > 0.0;
    }
    if (step.done) break;
    stack.push(step.obs);
  }
  tr.bootstrap_value = 0.0;
  tr.episode_return = result.episode_return;
  result.length = static_cast<int>(tr.size());
  return result;
}

PolicyActor::PolicyActor(const PolicyParams& params, int frame_stack, bool greedy)
    : params_(params), frame_stack_(frame_stack), greedy_(greedy) {}

void PolicyActor::begin_episode(const Env&, const Observation& obs) {
  stack_.emplace(encoding_size(obs), frame_stack_);
  stack_->reset(obs);
  first_ = true;
}

ActionId PolicyActor::act(const Env&, const Observation& obs, Rng& rng) {
  if (!first_) stack_->push(obs);
  first_ = false;
  const ForwardOut out = forward(params_, stack_->stacked());
  return greedy_ ? greedy_action(out).action : sample_action(out, rng).action;
}

ActionId RandomActor::act(const Env& env, const Observation&, Rng& rng) {
  return static_cast<ActionId>(uniform_index(rng, static_cast<std::size_t>(env.action_count())));
}

namespace {

struct PlanState {
  Pos pos;
  int facing;
};

// Mirrors Env::step_maze for a forward move.
Pos forward_move(const Level& lv, const std::vector<std::uint8_t>& ice, Pos pos, int facing) {
  const Pos d = facing_delta(facing);
  const Pos next{pos.x + d.x, pos.y + d.y};
  if (lv.is_wall(next)) return pos;
  if (next != lv.goal && lv.kind == EnvKind::kIcyMaze && ice[lv.index(next)] != 0) {
    const Pos beyond{next.x + d.x, next.y + d.y};
    if (!lv.is_wall(beyond)) return beyond;
  }
  return next;
}

}  // namespace

ActionId BfsOracleActor::act(const Env& env, const Observation&, Rng&) {
  const EnvState& st = env.state();
  const Level& lv = *st.level;
  if (!lv.is_grid()) {
    // Fruit rooms: open doors, walk through, eat the correct fruit.
    if (st.room == lv.room_count) {
      return st.correct_fruit == Fruit::kApple ? fruit_action::kEatApple : fruit_action::kEatBanana;
    }
    return st.kicks_remaining[st.room] > 0 ? fruit_action::kKick : fruit_action::kForward;
  }
  const std::size_t cells = lv.cells.size();
  auto key = [&](Pos p, int f) { return lv.index(p) * 4 + static_cast<std::size_t>(f); };
  std::vector<int> first_action(cells * 4, -1);
  std::vector<std::uint8_t> seen(cells * 4, 0);
  std::deque<PlanState> queue;
  seen[key(st.pos, st.facing)] = 1;
  queue.push_back({st.pos, st.facing});
  while (!queue.empty()) {
    const PlanState cur = queue.front();
    queue.pop_front();
    if (cur.pos == lv.goal) return first_action[key(cur.pos, cur.facing)];
    const int origin = first_action[key(cur.pos, cur.facing)];
    const PlanState nexts[3] = {
        {cur.pos, (cur.facing + 3) % 4},
        {cur.pos, (cur.facing + 1) % 4},
        {forward_move(lv, st.ice, cur.pos, cur.facing), cur.facing},
    };
    for (int a = 0; a < 3; ++a) {
      const std::size_t k = key(nexts[a].pos, nexts[a].facing);
      if (seen[k]) continue;
      seen[k] = 1;
      first_action[k] = origin < 0 ? a : origin;
      queue.push_back(nexts[a]);
    }
  }
  return maze_action::kLeft;
}

EpisodeResult run_episode(Actor& actor, Env& env, std::shared_ptr<const Level> level,
                          std::uint64_t episode_seed, Rng& rng) {
  EpisodeResult result;
  Observation obs = env.reset(std::move(level), episode_seed);
  actor.begin_episode(env, obs);
  for (;;) {
    const ActionId a = actor.act(env, obs, rng);
    const StepResult step = env.step(a);
    result.actions.push_back(a);
    result.episode_return += step.reward;
    result.length += 1;
    if (step.info.reached_goal) result.solved = true;
    if (step.info.ate_fruit) {
      result.ate_fruit = step.info.ate_fruit;
      result.solved = step.reward > 0.0;
    }
    if (step.done) break;
    obs = step.obs;
  }
  return result;
}

}  // namespace ued
