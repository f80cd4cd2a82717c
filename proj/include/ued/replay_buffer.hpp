#ifndef UED_REPLAY_BUFFER_HPP
#define UED_REPLAY_BUFFER_HPP

#include <optional>
#include <vector>

#include "ued/level.hpp"
#include "ued/scoring.hpp"

namespace ued {

enum class Prioritization { kRank, kProportional, kGreedy };

std::string_view prioritization_name(Prioritization p);
Prioritization prioritization_from_name(std::string_view name);

struct ReplayConfig {
  std::size_t capacity = 4000;
  double temperature = 0.3;
  double staleness_coef = 0.3;
  Prioritization prioritization = Prioritization::kRank;
  double replay_rate = 0.95;
  // With a finite training set: P(replay) = seen / train_set_size.
  bool anneal = false;
  ScoreKind score_kind = ScoreKind::kPVL;

  void validate() const;  // throws kConfigInvalid
};

struct BufferEntry {
  std::uint64_t level_id = 0;
  Level level;
  double score = 0.0;
  std::uint64_t timestamp = 0;
  double max_return = 0.0;
  double last_return = 0.0;
  std::uint64_t visit_count = 0;
  std::uint64_t insertion = 0;  // monotone insertion order, breaks rank ties
};

enum class UpdateOutcome { kInserted, kUpdated, kReplaced, kRejected };

class LevelBuffer {
 public:
  explicit LevelBuffer(ReplayConfig config);

  const ReplayConfig& config() const { return config_; }
  const std::vector<BufferEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool full() const { return entries_.size() >= config_.capacity; }

  std::vector<double> score_distribution() const;
  std::vector<double> staleness_distribution(std::uint64_t episode_count) const;
  // (1 - rho) P_S + rho P_C. Throws kEmptyBuffer.
  std::vector<double> replay_distribution(std::uint64_t episode_count) const;

  // Index of the minimal-support entry (first on ties).
  std::size_t min_support_index(std::uint64_t episode_count) const;
  // Score a candidate must beat to enter: the min-support score when full.
  double insertion_threshold(std::uint64_t episode_count) const;

  // Insert/replace/update following the capacity-gated replacement rule.
  UpdateOutcome update(std::uint64_t level_id, const Level& level, double score,
                       std::uint64_t episode_count, double episode_return);

  std::optional<std::size_t> find(std::uint64_t level_id) const;
  std::size_t sample(std::uint64_t episode_count, Rng& rng) const;
  // Refresh the staleness timestamp of an entry that was just replayed.
  void touch(std::size_t index, std::uint64_t episode_count);

  double mean_score() const;

  // Restores entries verbatim (checkpoint resume).
  void restore(std::vector<BufferEntry> entries, std::uint64_t next_insertion);
  std::uint64_t next_insertion() const { return next_insertion_; }

 private:
  ReplayConfig config_;
  std::vector<BufferEntry> entries_;
  std::uint64_t next_insertion_ = 0;
};

// Replay decision d. Never true on an empty buffer.
bool replay_decision(const LevelBuffer& buffer, std::size_t seen_count,
                     std::optional<std::size_t> train_set_size, const ReplayConfig& cfg,
                     Rng& rng);

}  // namespace ued

#endif  // UED_REPLAY_BUFFER_HPP
