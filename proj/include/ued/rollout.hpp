#ifndef UED_ROLLOUT_HPP
#define UED_ROLLOUT_HPP

#include <memory>
#include <optional>
#include <vector>

#include "ued/envs.hpp"
#include "ued/policy.hpp"
#include "ued/ppo.hpp"

namespace ued {

// Concatenation of the last `frames` encoded observations, newest first;
// missing history is zero.
class FrameStack {
 public:
  FrameStack(std::size_t frame_dim, int frames);
  void reset(const Observation& obs);
  void push(const Observation& obs);
  const Eigen::VectorXd& stacked() const { return stacked_; }
  std::size_t size() const { return static_cast<std::size_t>(stacked_.size()); }

 private:
  std::size_t frame_dim_;
  int frames_;
  Eigen::VectorXd stacked_;
};

struct EpisodeResult {
  Trajectory traj;
  double episode_return = 0.0;
  bool solved = false;
  std::optional<Fruit> ate_fruit;
  std::vector<int> actions;
  int length = 0;
};

struct RolloutOptions {
  int frame_stack = 4;
  bool greedy = false;
  bool record_dists = false;
};

// Samples from the policy and records everything PPO and the scorers need.
EpisodeResult collect_episode(const PolicyParams& params, Env& env,
                              std::shared_ptr<const Level> level, std::uint64_t episode_seed,
                              Rng& rng, const RolloutOptions& options);

class Actor {
 public:
  virtual ~Actor() = default;
  virtual void begin_episode(const Env& env, const Observation& obs) { (void)env; (void)obs; }
  virtual ActionId act(const Env& env, const Observation& obs, Rng& rng) = 0;
};

class PolicyActor : public Actor {
 public:
  PolicyActor(const PolicyParams& params, int frame_stack, bool greedy);
  void begin_episode(const Env& env, const Observation& obs) override;
  ActionId act(const Env& env, const Observation& obs, Rng& rng) override;

 private:
  const PolicyParams& params_;
  int frame_stack_;
  bool greedy_;
  std::optional<FrameStack> stack_;
  bool first_ = true;
};

class RandomActor : public Actor {
 public:
  ActionId act(const Env& env, const Observation& obs, Rng& rng) override;
};

// Privileged planner: shortest action sequence over (position, facing) using
// the true dynamics (ice slides included). Stays put when the goal is
// unreachable.
class BfsOracleActor : public Actor {
 public:
  ActionId act(const Env& env, const Observation& obs, Rng& rng) override;
};

// Runs an actor for one episode without recording a trajectory.
EpisodeResult run_episode(Actor& actor, Env& env, std::shared_ptr<const Level> level,
                          std::uint64_t episode_seed, Rng& rng);

}  // namespace ued

#endif  // UED_ROLLOUT_HPP
