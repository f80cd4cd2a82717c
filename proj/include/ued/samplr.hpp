#ifndef UED_SAMPLR_HPP
#define UED_SAMPLR_HPP

#include <optional>
#include <vector>

#include "ued/envs.hpp"
#include "ued/rollout.hpp"

namespace ued {

// Ground-truth distribution of the aleatoric parameters.
struct AleatoricPrior {
  double ice_alpha = 1.0;
  double ice_beta = 15.0;
  double apple_prob = 0.7;
};

// Exact Beta posterior over the ice rate given the tiles visited so far.
struct BeliefPosterior {
  double alpha = 1.0;
  double beta = 1.0;
  std::uint64_t n_plus = 0;   // visited icy tiles
  std::uint64_t n_minus = 0;  // visited clean tiles
  std::vector<std::uint8_t> counted;

  double post_alpha() const { return alpha + static_cast<double>(n_plus); }
  double post_beta() const { return beta + static_cast<double>(n_minus); }
  double predictive_mean() const { return post_alpha() / (post_alpha() + post_beta()); }
};

BeliefPosterior make_belief(double alpha, double beta, std::size_t cell_count = 0);
// Throws kDoubleCount when the tile was already counted.
void posterior_update(BeliefPosterior& belief, std::size_t cell, bool icy);
// Counts every visited tile of the state not yet in the belief.
void observe_visits(BeliefPosterior& belief, const EnvState& state);

// Draws q from the posterior and redraws the ice of every unvisited open tile
// i.i.d. Bernoulli(q). Visited tiles keep their value.
void resample_unvisited_ice(EnvState& state, const BeliefPosterior& belief, Rng& rng);

// Copies the primary's state into `fictitious` and resamples the unobserved
// aleatoric state (ice from the belief, fruit from the prior). Throws
// kStateSyncFailure when the primary has no live episode or the copy
// disagrees with it on observed state.
void sync_fictitious(const Env& primary, const BeliefPosterior& belief,
                     const AleatoricPrior& prior, Rng& rng, Env& fictitious);

// sync_fictitious followed by one step of the copy. The primary is untouched.
StepResult fictitious_transition(const Env& primary, const BeliefPosterior& belief,
                                 const AleatoricPrior& prior, ActionId action, Rng& rng,
                                 Env& fictitious);

// Level with its aleatoric parameters redrawn from the prior.
Level naive_ground(const Level& level, const AleatoricPrior& prior, Rng& rng);

struct FictitiousEpisode {
  EpisodeResult result;  // traj holds fictitious rewards, dones and next values
  double fictitious_return = 0.0;
  BeliefPosterior belief;
  double real_ice_rate = 0.0;         // ice fraction of the level's open tiles
  double fictitious_ice_rate = 0.0;   // mean over steps of the resampled rate
  std::optional<Fruit> effective_fruit;  // fruit used by the last fictitious step
};

// Real episode on `level` whose training data comes from fictitious
// transitions. `act_on_fictitious` selects which observation feeds the
// policy; the two agree whenever the aleatoric state is unobservable.
FictitiousEpisode collect_fictitious_episode(const PolicyParams& params, Env& primary,
                                             Env& fictitious,
                                             std::shared_ptr<const Level> level,
                                             std::uint64_t episode_seed,
                                             const AleatoricPrior& prior, Rng& rng,
                                             const RolloutOptions& options,
                                             bool act_on_fictitious = true);

}  // namespace ued

#endif  // UED_SAMPLR_HPP
