#include "ued/replay_buffer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ued {

std::string_view prioritization_name(Prioritization p) {
  switch (p) {
    case Prioritization::kRank: return "rank";
    case Prioritization::kProportional: return "proportional";
    case Prioritization::kGreedy: return "greedy";
  }
  return "rank";
}

Prioritization prioritization_from_name(std::string_view name) {
  if (name == "rank") return Prioritization::kRank;
  if (name == "proportional" || name == "power") return Prioritization::kProportional;
  if (name == "greedy") return Prioritization::kGreedy;
  throw UedError(ErrorCode::kConfigInvalid, "unknown prioritization '" + std::string(name) + "'");
}

void ReplayConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw UedError(ErrorCode::kConfigInvalid, "replay." + what);
  };
  if (capacity < 1) fail("capacity must be >= 1");
  if (!(temperature > 0.0)) fail("temperature must be positive");
  if (!(staleness_coef >= 0.0 && staleness_coef <= 1.0)) fail("staleness_coef must be in [0,1]");
  if (!(replay_rate >= 0.0 && replay_rate <= 1.0)) fail("replay_rate must be in [0,1]");
}

LevelBuffer::LevelBuffer(ReplayConfig config) : config_(config) { config_.validate(); }

namespace {

void normalize_or_uniform(std::vector<double>& w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(w.size()));
    return;
  }
  for (double& x : w) x /= total;
}

}  // namespace

std::vector<double> LevelBuffer::score_distribution() const {
  if (entries_.empty()) throw UedError(ErrorCode::kEmptyBuffer, "score distribution of empty buffer");
  const std::size_t n = entries_.size();
  std::vector<double> w(n, 0.0);
  switch (config_.prioritization) {
    case Prioritization::kRank: {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (entries_[a].score != entries_[b].score) return entries_[a].score > entries_[b].score;
        return entries_[a].insertion < entries_[b].insertion;
      });
      for (std::size_t r = 0; r < n; ++r) {
        w[order[r]] = std::pow(1.0 / static_cast<double>(r + 1), 1.0 / config_.temperature);
      }
      break;
    }
    case Prioritization::kProportional: {
      double lo = 0.0;
      for (const auto& e : entries_) lo = std::min(lo, e.score);
      for (std::size_t i = 0; i < n; ++i) {
        const double h = std::max(entries_[i].score - lo, 0.0) + 1e-8;
        w[i] = std::pow(h, 1.0 / config_.temperature);
      }
      break;
    }
    case Prioritization::kGreedy: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (entries_[i].score > entries_[best].score) best = i;
      }
      w[best] = 1.0;
      break;
    }
  }
  normalize_or_uniform(w);
  return w;
}

std::vector<double> LevelBuffer::staleness_distribution(std::uint64_t episode_count) const {
  if (entries_.empty()) throw UedError(ErrorCode::kEmptyBuffer, "staleness distribution of empty buffer");
  std::vector<double> w(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto c = entries_[i].timestamp;
    w[i] = episode_count > c ? static_cast<double>(episode_count - c) : 0.0;
  }
  normalize_or_uniform(w);
  return w;
}

std::vector<double> LevelBuffer::replay_distribution(std::uint64_t episode_count) const {
  const std::vector<double> ps = score_distribution();
  const std::vector<double> pc = staleness_distribution(episode_count);
  std::vector<double> out(ps.size());
  const double rho = config_.staleness_coef;
  for (std::size_t i = 0; i < ps.size(); ++i) out[i] = (1.0 - rho) * ps[i] + rho * pc[i];
  normalize_or_uniform(out);
  return out;
}

std::size_t LevelBuffer::min_support_index(std::uint64_t episode_count) const {
  const std::vector<double> p = replay_distribution(episode_count);
  return static_cast<std::size_t>(std::min_element(p.begin(), p.end()) - p.begin());
}

double LevelBuffer::insertion_threshold(std::uint64_t episode_count) const {
  if (!full()) return 0.0;
  return entries_[min_support_index(episode_count)].score;
}

std::optional<std::size_t> LevelBuffer::find(std::uint64_t level_id) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].level_id == level_id) return i;
  }
  return std::nullopt;
}

UpdateOutcome LevelBuffer::update(std::uint64_t level_id, const Level& level, double score,
                                  std::uint64_t episode_count, double episode_return) {
  if (!std::isfinite(score)) {
    throw UedError(ErrorCode::kConfigInvalid, "level score must be finite");
  }
  if (auto idx = find(level_id)) {
    BufferEntry& e = entries_[*idx];
    e.score = score;
    e.timestamp = episode_count;
    e.max_return = std::max(e.max_return, episode_return);
    e.last_return = episode_return;
    e.visit_count += 1;
    return UpdateOutcome::kUpdated;
  }
  BufferEntry entry{level_id, level, score, episode_count, episode_return, episode_return, 1,
                    next_insertion_};
  if (!full()) {
    entries_.push_back(std::move(entry));
    ++next_insertion_;
    return UpdateOutcome::kInserted;
  }
  const std::size_t victim = min_support_index(episode_count);
  if (entries_[victim].score < score) {
    entries_[victim] = std::move(entry);
    ++next_insertion_;
    return UpdateOutcome::kReplaced;
  }
  return UpdateOutcome::kRejected;
}

std::size_t LevelBuffer::sample(std::uint64_t episode_count, Rng& rng) const {
  const std::vector<double> p = replay_distribution(episode_count);
  return sample_categorical(rng, p.data(), p.size());
}

void LevelBuffer::touch(std::size_t index, std::uint64_t episode_count) {
  entries_.at(index).timestamp = episode_count;
}

double LevelBuffer::mean_score() const {
  if (entries_.empty()) return 0.0;
  double total = 0.0;
  for (const auto& e : entries_) total += e.score;
  return total / static_cast<double>(entries_.size());
}

void LevelBuffer::restore(std::vector<BufferEntry> entries, std::uint64_t next_insertion) {
  entries_ = std::move(entries);
  next_insertion_ = next_insertion;
}

bool replay_decision(const LevelBuffer& buffer, std::size_t seen_count,
                     std::optional<std::size_t> train_set_size, const ReplayConfig& cfg,
                     Rng& rng) {
  if (buffer.empty()) return false;
  double p = cfg.replay_rate;
  if (cfg.anneal && train_set_size && *train_set_size > 0) {
    p = std::min(1.0, static_cast<double>(seen_count) / static_cast<double>(*train_set_size));
  }
  // Consume one draw even for p in {0,1} so the stream length is fixed.
  return uniform01(rng) < p;
}

}  // namespace ued
