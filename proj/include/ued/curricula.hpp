#ifndef UED_CURRICULA_HPP
#define UED_CURRICULA_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ued/envs.hpp"
#include "ued/generators.hpp"
#include "ued/ppo.hpp"
#include "ued/replay_buffer.hpp"
#include "ued/rollout.hpp"
#include "ued/samplr.hpp"
#include "ued/scoring.hpp"

namespace ued {

enum class CurriculumKind { kDR, kPLR, kRobustPLR, kMinimax, kPAIRED, kREPAIRED, kACCEL, kSAMPLR };
enum class EditCriterion { kHard, kBatch };
enum class Grounding { kNone, kNaive };

std::string_view curriculum_kind_name(CurriculumKind kind);
CurriculumKind curriculum_kind_from_name(std::string_view name);
std::string_view edit_criterion_name(EditCriterion c);
EditCriterion edit_criterion_from_name(std::string_view name);

struct CurriculumConfig {
  CurriculumKind kind = CurriculumKind::kRobustPLR;
  int episodes_per_iteration = 1;
  // Finite training set of DR levels (ids 0..n-1); 0 means unbounded.
  std::size_t train_set_size = 0;

  // ACCEL.
  int edits_per_level = 1;
  EditCriterion edit_criterion = EditCriterion::kHard;
  double initial_fill = 0.5;
  MazeLayout accel_generator = MazeLayout::kEmptyRoom;

  // PAIRED-style generator.
  std::vector<int> generator_hidden{32};
  double generator_entropy_coef = 0.0;
  int generator_wall_budget = 25;
  int regret_episodes = 1;

  // Aleatoric handling.
  Grounding grounding = Grounding::kNone;
  AleatoricPrior prior;
  bool act_on_fictitious = true;

  void validate(const DomainConfig& domain) const;
};

struct TrainerConfig {
  DomainConfig domain;
  EnvConfig env;
  CurriculumConfig curriculum;
  PPOConfig ppo;
  ReplayConfig replay;
  std::vector<int> hidden_dims{64, 64};
  bool detach_value_encoder = false;
  int frame_stack = 4;
  bool max_mc_dense = false;

  void validate() const;
};

// Per-level provenance, kept for the whole run.
struct LevelRecord {
  std::uint64_t id = 0;
  std::optional<std::uint64_t> parent;
  std::string origin;  // "train", "dr", "generator", "edit", "prefill"
};

struct IterationRecord {
  std::uint64_t iteration = 0;
  int d = 0;
  bool trained = false;
  std::vector<std::uint64_t> level_ids;
  double score = 0.0;           // mean over the iteration's student episodes
  double student_return = 0.0;  // mean real return
  double solved_rate = 0.0;
  std::uint64_t env_steps = 0;  // student steps this iteration
  std::size_t buffer_size = 0;
  double mean_buffer_score = 0.0;
  double mean_shortest_path = 0.0;
  double mean_block_count = 0.0;
  double lzw_action_complexity = 0.0;
  double generator_reward = 0.0;
  // SAMPLR / aleatoric statistics.
  double posterior_alpha = 0.0;
  double posterior_beta = 0.0;
  double fictitious_ice_rate = 0.0;
  double real_ice_rate = 0.0;
  int trained_apple = 0;
  int trained_fruit_episodes = 0;
  int edited_levels = 0;
  int inserted_levels = 0;
};

struct StudentState {
  PolicyParams params;
  AdamState opt;
  LevelBuffer buffer;
  std::uint64_t updates = 0;
};

struct GeneratorState {
  PolicyParams params;
  AdamState opt;
  std::uint64_t updates = 0;
};

// Builds a level by running the designer policy; exposed for tests.
struct GeneratedLevel {
  Level level;
  Trajectory traj;  // rewards left at zero
};
int generator_input_dim(const DomainConfig& domain, int wall_budget);
int generator_action_count(const DomainConfig& domain);
GeneratedLevel generate_level(const PolicyParams& generator, const DomainConfig& domain,
                              int wall_budget, Rng& rng);

// Mean antagonist return minus mean protagonist return on `level`.
double relative_regret(const Level& level, Actor& protagonist, Actor& antagonist,
                       int episodes, const EnvConfig& env, std::uint64_t seed);

class Trainer {
 public:
  Trainer(TrainerConfig config, std::uint64_t master_seed);

  IterationRecord run_iteration();

  const TrainerConfig& config() const { return config_; }
  std::uint64_t iteration() const { return iteration_; }
  std::uint64_t episode_count() const { return episode_count_; }
  std::uint64_t student_updates() const { return students_[0].updates; }

  StudentState& student(std::size_t i = 0) { return students_.at(i); }
  const StudentState& student(std::size_t i = 0) const { return students_.at(i); }
  std::size_t student_count() const { return students_.size(); }
  bool has_generator() const { return generator_.has_value(); }
  const GeneratorState& generator() const { return *generator_; }
  const std::vector<Level>& train_set() const { return train_set_; }
  const std::vector<LevelRecord>& level_log() const { return level_log_; }
  // Ids of the finite training set already seen (PLR's unseen-first sampling).
  std::size_t seen_count() const { return seen_count_; }

  // Complete resumable state as JSON.
  std::string state_json() const;
  void restore_state_json(const std::string& text);

 private:
  struct Episode {
    std::uint64_t level_id = 0;
    std::shared_ptr<const Level> level;
    EpisodeResult result;
    double score = 0.0;
  };

  IterationRecord run_buffered_iteration();
  IterationRecord run_generator_iteration();
  IterationRecord run_dr_iteration();
  IterationRecord run_repaired_iteration();

  std::uint64_t new_level_id(std::optional<std::uint64_t> parent, const std::string& origin);
  std::pair<std::uint64_t, Level> fresh_level();
  Level ground(const Level& level);
  EpisodeResult play(StudentState& student, const Level& level, bool record_dists);
  double score_episode(const StudentState& student, std::uint64_t level_id,
                       const EpisodeResult& ep) const;
  bool insert_if_meets_threshold(StudentState& student, std::uint64_t id, const Level& level,
                                 double score, double episode_return);
  void train(StudentState& student, const std::vector<Trajectory>& trajectories);
  void train_generator(std::vector<GeneratedLevel>& generated, const std::vector<double>& rewards);
  void prefill_accel();
  void finish_record(IterationRecord& rec, const std::vector<Episode>& episodes,
                     const StudentState& student) const;

  TrainerConfig config_;
  std::uint64_t master_seed_;
  Env env_;
  Env fictitious_env_;
  ScoreParams score_params_;
  RolloutOptions rollout_;

  std::vector<StudentState> students_;
  std::optional<GeneratorState> generator_;
  std::vector<Level> train_set_;
  std::vector<std::uint8_t> train_seen_;
  std::size_t seen_count_ = 0;
  std::vector<LevelRecord> level_log_;

  Rng rng_levels_;
  Rng rng_replay_;
  Rng rng_env_;
  Rng rng_actions_;
  Rng rng_ppo_;
  Rng rng_edits_;
  Rng rng_generator_;
  Rng rng_ground_;

  std::uint64_t iteration_ = 0;
  std::uint64_t episode_count_ = 0;
  std::uint64_t next_level_id_ = 0;
  bool prefilled_ = false;
};

}  // namespace ued

#endif  // UED_CURRICULA_HPP
