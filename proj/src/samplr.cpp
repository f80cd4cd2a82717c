#include "ued/samplr.hpp"

#include "ued/generators.hpp"

namespace ued {

BeliefPosterior make_belief(double alpha, double beta, std::size_t cell_count) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw UedError(ErrorCode::kConfigInvalid, "Beta prior parameters must be positive");
  }
  BeliefPosterior b;
  b.alpha = alpha;
  b.beta = beta;
  b.counted.assign(cell_count, 0);
  return b;
}

void posterior_update(BeliefPosterior& belief, std::size_t cell, bool icy) {
  if (cell >= belief.counted.size()) belief.counted.resize(cell + 1, 0);
  if (belief.counted[cell]) {
    throw UedError(ErrorCode::kDoubleCount, "tile " + std::to_string(cell) + " already counted");
  }
  belief.counted[cell] = 1;
  if (icy) {
    belief.n_plus += 1;
  } else {
    belief.n_minus += 1;
  }
}

void observe_visits(BeliefPosterior& belief, const EnvState& state) {
  if (!state.level || state.level->kind != EnvKind::kIcyMaze) return;
  if (belief.counted.size() < state.visited.size()) belief.counted.resize(state.visited.size(), 0);
  for (std::size_t i = 0; i < state.visited.size(); ++i) {
    if (state.visited[i] && !belief.counted[i]) posterior_update(belief, i, state.ice[i] != 0);
  }
}

void resample_unvisited_ice(EnvState& state, const BeliefPosterior& belief, Rng& rng) {
  const Level& lv = *state.level;
  const double q = sample_beta(rng, belief.post_alpha(), belief.post_beta());
  for (std::size_t i = 0; i < lv.cells.size(); ++i) {
    if (lv.cells[i] == Cell::kWall || state.visited[i]) continue;
    state.ice[i] = bernoulli(rng, q) ? 1 : 0;
  }
}

void sync_fictitious(const Env& primary, const BeliefPosterior& belief,
                     const AleatoricPrior& prior, Rng& rng, Env& fictitious) {
  const EnvState& src = primary.state();
  if (!src.level || src.done) {
    throw UedError(ErrorCode::kStateSyncFailure, "primary simulator has no live episode");
  }
  fictitious.set_state(src);
  EnvState& dst = fictitious.mutable_state();
  if (src.level->kind == EnvKind::kIcyMaze) {
    if (dst.ice.size() != src.level->cells.size() || dst.visited.size() != dst.ice.size()) {
      throw UedError(ErrorCode::kStateSyncFailure, "ice layer does not match the grid");
    }
    resample_unvisited_ice(dst, belief, rng);
    for (std::size_t i = 0; i < dst.ice.size(); ++i) {
      if (dst.visited[i] && dst.ice[i] != src.ice[i]) {
        throw UedError(ErrorCode::kStateSyncFailure, "visited tile changed under resampling");
      }
    }
  } else if (src.level->kind == EnvKind::kFruitChoice) {
    dst.correct_fruit = bernoulli(rng, prior.apple_prob) ? Fruit::kApple : Fruit::kBanana;
  }
  if (dst.pos != src.pos || dst.facing != src.facing || dst.step_count != src.step_count ||
      dst.room != src.room) {
    throw UedError(ErrorCode::kStateSyncFailure, "fictitious state diverged from primary");
  }
}

StepResult fictitious_transition(const Env& primary, const BeliefPosterior& belief,
                                 const AleatoricPrior& prior, ActionId action, Rng& rng,
                                 Env& fictitious) {
  sync_fictitious(primary, belief, prior, rng, fictitious);
  return fictitious.step(action);
}

Level naive_ground(const Level& level, const AleatoricPrior& prior, Rng& rng) {
  Level out = level;
  if (out.kind == EnvKind::kIcyMaze) {
    resample_ice(out, prior.ice_alpha, prior.ice_beta, rng);
  } else if (out.kind == EnvKind::kFruitChoice) {
    resample_fruit(out, prior.apple_prob, rng);
  }
  return out;
}

namespace {

double open_ice_rate(const Level& lv, const std::vector<std::uint8_t>& ice) {
  std::size_t open = 0;
  std::size_t icy = 0;
  for (std::size_t i = 0; i < lv.cells.size(); ++i) {
    if (lv.cells[i] == Cell::kWall) continue;
    ++open;
    if (ice[i]) ++icy;
  }
  return open == 0 ? 0.0 : static_cast<double>(icy) / static_cast<double>(open);
}

}  // namespace

FictitiousEpisode collect_fictitious_episode(const PolicyParams& params, Env& primary,
                                             Env& fictitious,
                                             std::shared_ptr<const Level> level,
                                             std::uint64_t episode_seed,
                                             const AleatoricPrior& prior, Rng& rng,
                                             const RolloutOptions& options,
                                             bool act_on_fictitious) {
  FictitiousEpisode ep;
  const bool icy = level->kind == EnvKind::kIcyMaze;
  ep.belief = make_belief(prior.ice_alpha, prior.ice_beta, level->cells.size());
  if (icy) ep.real_ice_rate = open_ice_rate(*level, level->ice);
  Observation real_obs = primary.reset(std::move(level), episode_seed);
  observe_visits(ep.belief, primary.state());

  EpisodeResult& result = ep.result;
  Trajectory& tr = result.traj;
  std::optional<FrameStack> stack;
  std::optional<std::size_t> pending;
  double fictitious_ice_total = 0.0;
  for (;;) {
    sync_fictitious(primary, ep.belief, prior, rng, fictitious);
    const EnvState& fs = fictitious.state();
    if (icy) fictitious_ice_total += open_ice_rate(*fs.level, fs.ice);
    if (!icy && fs.level->kind == EnvKind::kFruitChoice) ep.effective_fruit = fs.correct_fruit;
    const Observation cur = act_on_fictitious ? fictitious.observe() : real_obs;
    if (!stack) {
      stack.emplace(encoding_size(cur), options.frame_stack);
      stack->reset(cur);
    } else {
      stack->push(cur);
    }
    const ForwardOut out = forward(params, stack->stacked());
    if (pending) {
      tr.next_values[*pending] = out.value;
      pending.reset();
    }
    const ActionSample a = options.greedy ? greedy_action(out) : sample_action(out, rng);
    tr.obs.push_back(stack->stacked());
    tr.actions.push_back(a.action);
    tr.log_probs.push_back(a.log_prob);
    tr.values.push_back(out.value);
    if (options.record_dists) tr.dists.push_back(softmax(out.logits));

    const StepResult fict = fictitious.step(a.action);
    const StepResult real = primary.step(a.action);
    observe_visits(ep.belief, primary.state());

    const std::size_t t = tr.size();
    tr.rewards.push_back(fict.reward);
    tr.dones.push_back(fict.done ? 1 : 0);
    tr.next_values.push_back(0.0);
    ep.fictitious_return += fict.reward;
    if (!fict.done) {
      if (!real.done && fict.obs == real.obs) {
        pending = t;
      } else {
        FrameStack next = *stack;
        next.push(fict.obs);
        tr.next_values[t] = forward(params, next.stacked()).value;
      }
    }

    result.actions.push_back(a.action);
    result.episode_return += real.reward;
    if (real.info.reached_goal) result.solved = true;
    if (real.info.ate_fruit) {
      result.ate_fruit = real.info.ate_fruit;
      result.solved = real.reward > 0.0;
    }
    if (real.done) break;
    real_obs = real.obs;
  }
  tr.bootstrap_value = 0.0;
  tr.episode_return = ep.fictitious_return;
  result.length = static_cast<int>(tr.size());
  if (icy && result.length > 0) ep.fictitious_ice_rate = fictitious_ice_total / result.length;
  return ep;
}

}  // namespace ued
