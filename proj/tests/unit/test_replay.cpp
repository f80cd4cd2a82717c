#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ued/generators.hpp"
#include "ued/replay_buffer.hpp"

using namespace ued;

namespace {

Level lvl(int i) {
  // Distinct trivially valid levels.
  return make_empty_maze(9, 9, {1 + i % 7, 1}, kEast, {7, 7});
}

ReplayConfig cfg(std::size_t k, double beta = 1.0, double rho = 0.0) {
  ReplayConfig c;
  c.capacity = k;
  c.temperature = beta;
  c.staleness_coef = rho;
  return c;
}

}  // namespace

TEST_CASE("rank prioritisation example") {
  LevelBuffer b(cfg(10));
  b.update(0, lvl(0), 0.3, 0, 0.0);
  b.update(1, lvl(1), 0.1, 0, 0.0);
  b.update(2, lvl(2), 0.2, 0, 0.0);
  const auto p = b.score_distribution();
  CHECK(p[0] == doctest::Approx(6.0 / 11.0));
  CHECK(p[1] == doctest::Approx(2.0 / 11.0));
  CHECK(p[2] == doctest::Approx(3.0 / 11.0));
}

TEST_CASE("staleness distribution example") {
  LevelBuffer b(cfg(10));
  b.update(0, lvl(0), 0.5, 5, 0.0);
  b.update(1, lvl(1), 0.5, 3, 0.0);
  b.update(2, lvl(2), 0.5, 2, 0.0);
  const auto pc = b.staleness_distribution(5);
  CHECK(pc[0] == doctest::Approx(0.0));
  CHECK(pc[1] == doctest::Approx(0.4));
  CHECK(pc[2] == doctest::Approx(0.6));
}

TEST_CASE("mixture of score and staleness") {
  ReplayConfig c = cfg(10, 1.0, 0.5);
  c.prioritization = Prioritization::kGreedy;
  LevelBuffer b(c);
  b.update(0, lvl(0), 0.9, 4, 0.0);
  b.update(1, lvl(1), 0.1, 0, 0.0);
  const auto p = b.replay_distribution(4);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));
}

TEST_CASE("zero staleness falls back to uniform") {
  LevelBuffer b(cfg(10, 1.0, 1.0));
  b.update(0, lvl(0), 0.3, 7, 0.0);
  const auto p = b.replay_distribution(7);
  CHECK(p.size() == 1);
  CHECK(p[0] == doctest::Approx(1.0));
}

TEST_CASE("proportional and greedy prioritisation") {
  ReplayConfig c = cfg(10);
  c.prioritization = Prioritization::kProportional;
  LevelBuffer b(c);
  b.update(0, lvl(0), -1.0, 0, 0.0);
  b.update(1, lvl(1), 1.0, 0, 0.0);
  const auto p = b.score_distribution();
  CHECK(p[0] < 1e-6);
  CHECK(p[1] > 1 - 1e-6);
  c.prioritization = Prioritization::kGreedy;
  LevelBuffer g(c);
  g.update(0, lvl(0), 0.4, 0, 0.0);
  g.update(1, lvl(1), 0.7, 0, 0.0);
  g.update(2, lvl(2), 0.7, 0, 0.0);
  const auto pg = g.score_distribution();
  CHECK(pg == std::vector<double>{0.0, 1.0, 0.0});
}

TEST_CASE("update rule") {
  SUBCASE("insert into empty buffer") {
    LevelBuffer b(cfg(2));
    CHECK(b.update(0, lvl(0), 0.5, 0, 0.0) == UpdateOutcome::kInserted);
    CHECK(b.size() == 1);
  }
  SUBCASE("candidate below min-support score is rejected") {
    LevelBuffer b(cfg(2));
    b.update(0, lvl(0), 0.9, 0, 0.0);
    b.update(1, lvl(1), 0.95, 0, 0.0);
    const auto before = b.entries();
    CHECK(b.update(2, lvl(2), 0.5, 1, 0.0) == UpdateOutcome::kRejected);
    CHECK(b.entries().size() == before.size());
    CHECK(b.entries()[0].level_id == before[0].level_id);
    CHECK(b.entries()[1].level_id == before[1].level_id);
  }
  SUBCASE("candidate above min-support score replaces it") {
    LevelBuffer b(cfg(2));
    b.update(0, lvl(0), 0.1, 0, 0.0);
    b.update(1, lvl(1), 0.9, 0, 0.0);
    CHECK(b.update(2, lvl(2), 0.5, 3, 0.0) == UpdateOutcome::kReplaced);
    CHECK_FALSE(b.find(0).has_value());
    const auto idx = b.find(2);
    REQUIRE(idx.has_value());
    CHECK(b.entries()[*idx].timestamp == 3);
  }
  SUBCASE("existing level updated in place") {
    LevelBuffer b(cfg(2));
    b.update(0, lvl(0), 0.1, 0, 0.2);
    CHECK(b.update(0, lvl(0), 0.7, 4, 0.6) == UpdateOutcome::kUpdated);
    CHECK(b.size() == 1);
    CHECK(b.entries()[0].score == 0.7);
    CHECK(b.entries()[0].timestamp == 4);
    CHECK(b.entries()[0].max_return == 0.6);
  }
}

TEST_CASE("empty buffer") {
  LevelBuffer b(cfg(3));
  CHECK_THROWS_AS(b.replay_distribution(0), UedError);
  Rng rng = make_rng(1, "empty");
  CHECK_FALSE(replay_decision(b, 0, std::nullopt, b.config(), rng));
}

TEST_CASE("replay decision") {
  Rng rng = make_rng(2, "decision");
  ReplayConfig c = cfg(10);
  LevelBuffer b(c);
  b.update(0, lvl(0), 0.1, 0, 0.0);
  c.anneal = true;
  for (int i = 0; i < 200; ++i) {
    CHECK_FALSE(replay_decision(b, 0, 100, c, rng));
    CHECK(replay_decision(b, 100, 100, c, rng));
  }
  c.anneal = false;
  c.replay_rate = 0.5;
  int ones = 0;
  for (int i = 0; i < 10000; ++i) ones += replay_decision(b, 0, std::nullopt, c, rng);
  CHECK(ones / 10000.0 >= 0.48);
  CHECK(ones / 10000.0 <= 0.52);
}

TEST_CASE("sampling follows the replay distribution") {
  LevelBuffer b(cfg(10, 0.5, 0.3));
  for (int i = 0; i < 5; ++i) b.update(i, lvl(i), 0.1 * i, i, 0.0);
  const auto p = b.replay_distribution(10);
  Rng rng = make_rng(3, "sample");
  std::vector<double> counts(5, 0.0);
  const int n = 50000;
  for (int i = 0; i < n; ++i) counts[b.sample(10, rng)] += 1.0;
  for (int i = 0; i < 5; ++i) CHECK(std::abs(counts[i] / n - p[i]) < 0.01);
}

TEST_CASE("randomised buffer laws") {
  Rng rng = make_rng(4, "laws");
  for (int trial = 0; trial < 200; ++trial) {
    ReplayConfig c = cfg(static_cast<std::size_t>(uniform_int(rng, 1, 8)), 0.05 + uniform01(rng),
                         uniform01(rng));
    c.prioritization = static_cast<Prioritization>(uniform_int(rng, 0, 2));
    LevelBuffer b(c);
    std::uint64_t episode = 0;
    for (int step = 0; step < 50; ++step) {
      ++episode;
      const double s = uniform01(rng);
      const auto id = static_cast<std::uint64_t>(uniform_int(rng, 0, 20));
      const bool present = b.find(id).has_value();
      const bool was_full = b.full();
      double min_score = 0.0;
      if (was_full && !present) min_score = b.entries()[b.min_support_index(episode)].score;
      const double old_min = b.empty() ? 0.0
                                       : std::min_element(b.entries().begin(), b.entries().end(),
                                                          [](auto& x, auto& y) { return x.score < y.score; })
                                             ->score;
      const UpdateOutcome out = b.update(id, lvl(static_cast<int>(id)), s, episode, 0.0);
      CHECK(b.size() <= c.capacity);
      if (was_full && !present) {
        CHECK((out == UpdateOutcome::kReplaced) == (min_score < s));
        if (out == UpdateOutcome::kReplaced) {
          double new_min = 1e9;
          for (const auto& e : b.entries()) new_min = std::min(new_min, e.score);
          CHECK(new_min >= old_min);
        }
      }
      const auto p = b.replay_distribution(episode);
      CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("rank distribution ignores monotone score transforms") {
  Rng rng = make_rng(5, "monotone");
  for (int trial = 0; trial < 200; ++trial) {
    LevelBuffer a(cfg(8, 0.3)), b(cfg(8, 0.3));
    for (int i = 0; i < 8; ++i) {
      const double s = uniform01(rng) - 0.5;
      a.update(i, lvl(i), s, 0, 0.0);
      b.update(i, lvl(i), std::exp(3.0 * s) + 7.0, 0, 0.0);
    }
    CHECK(a.score_distribution() == b.score_distribution());
  }
}

TEST_CASE("restore keeps entries verbatim") {
  LevelBuffer a(cfg(4, 0.5, 0.2));
  for (int i = 0; i < 4; ++i) a.update(i, lvl(i), 0.2 * i, i, 0.1 * i);
  LevelBuffer b(cfg(4, 0.5, 0.2));
  b.restore(a.entries(), a.next_insertion());
  CHECK(b.replay_distribution(9) == a.replay_distribution(9));
  CHECK(b.next_insertion() == a.next_insertion());
}
