#include <doctest.h>

#include <map>
#include <string>

#include "ued/generators.hpp"
#include "ued/metrics.hpp"
#include "ued/stats.hpp"

using namespace ued;

namespace {

// Plain LZW written independently of the library version.
std::size_t reference_lzw(const std::vector<int>& seq) {
  std::map<std::vector<int>, int> dict;
  for (int s : seq) dict.emplace(std::vector<int>{s}, 0);
  std::size_t codes = 0;
  std::vector<int> w;
  for (int s : seq) {
    std::vector<int> ws = w;
    ws.push_back(s);
    if (dict.count(ws)) {
      w = ws;
    } else {
      ++codes;
      dict.emplace(ws, 0);
      w = {s};
    }
  }
  return codes + (w.empty() ? 0 : 1);
}

std::vector<int> str(const std::string& s) { return {s.begin(), s.end()}; }

EvalSuite tiny_suite() {
  EvalSuite s;
  s.name = "tiny";
  s.levels.push_back({"open", make_empty_maze(7, 7, {1, 1}, kEast, {5, 5})});
  s.levels.push_back({"corner", make_empty_maze(5, 5, {3, 3}, kWest, {1, 1})});
  return s;
}

}  // namespace

TEST_CASE("lzw known values") {
  CHECK(lzw_complexity(str("aaaaaaaa")) == 4);
  CHECK(lzw_complexity(str("a")) == 1);
  CHECK(lzw_complexity(str("abababab")) == reference_lzw(str("abababab")));
  CHECK_THROWS_AS(lzw_complexity(std::vector<int>{}), UedError);
}

TEST_CASE("lzw matches reference and grows with randomness") {
  Rng rng = make_rng(5, "lzw");
  for (int t = 0; t < 100; ++t) {
    std::vector<int> seq(1 + uniform_index(rng, 300));
    for (int& s : seq) s = static_cast<int>(uniform_index(rng, 3));
    CHECK(lzw_complexity(seq) == reference_lzw(seq));
    // Prefixes never need more codes.
    std::vector<int> prefix(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(seq.size() / 2 + 1));
    CHECK(lzw_complexity(prefix) <= lzw_complexity(seq));
  }
  std::vector<int> constant(256, 1), noisy(256);
  for (int& s : noisy) s = static_cast<int>(uniform_index(rng, 3));
  CHECK(lzw_complexity(noisy) > lzw_complexity(constant));
}

TEST_CASE("oracle solves, random fails enclosed") {
  EnvConfig env;
  BfsOracleActor oracle;
  const EvalReport r = evaluate_actor(oracle, tiny_suite(), 3, env, 1);
  CHECK(r.mean_solved_rate == 1.0);
  CHECK(r.levels.size() == 2);
  CHECK(r.mean_return > 0.9);

  EvalSuite enclosed;
  enclosed.name = "enclosed";
  enclosed.levels.push_back({"box", maze_from_rows({"#######", "#A.#..#", "#..#G.#", "#..####", "#######"})});
  RandomActor random;
  const EvalReport z = evaluate_actor(random, enclosed, 5, env, 2);
  CHECK(z.mean_solved_rate == 0.0);
  CHECK(z.mean_return == 0.0);
  CHECK(evaluate_actor(oracle, enclosed, 1, env, 2).mean_solved_rate == 0.0);
}

TEST_CASE("evaluation is deterministic") {
  EnvConfig env;
  RandomActor a, b;
  const EvalReport r1 = evaluate_actor(a, tiny_suite(), 4, env, 9);
  const EvalReport r2 = evaluate_actor(b, tiny_suite(), 4, env, 9);
  CHECK(r1.to_json() == r2.to_json());
  CHECK(r1.to_csv() == r2.to_csv());
}

TEST_CASE("generalization gap") {
  const std::vector<double> train{0.8, 0.8}, test{0.5, 0.5};
  CHECK(generalization_gap(train, test) == doctest::Approx(0.3));
  CHECK(generalization_gap(test, train) == doctest::Approx(-0.3));
}

TEST_CASE("shipped suites load and are solvable") {
  for (const char* path : {UED_SOURCE_DIR "/suites/maze_9x9.json", UED_SOURCE_DIR "/suites/maze_15x15.json"}) {
    const EvalSuite s = load_suite(path);
    CHECK(!s.levels.empty());
    for (const auto& l : s.levels) CHECK(shortest_path_length(l.level) > 0);
  }
  CHECK_THROWS_AS(parse_suite(R"({"name": "x", "levels": [{"name": "bad"}]})"), UedError);
  CHECK_THROWS_AS(load_suite("/nonexistent/suite.json"), UedError);
}

TEST_CASE("stats helpers") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, y{2, 4, 5, 4, 6, 8, 9, 11, 12, 15};
  const auto sp = stats::spearman(x, y);
  CHECK(sp.statistic > 0.9);
  CHECK(sp.p_value < 0.001);
  std::vector<double> rev(x.rbegin(), x.rend());
  CHECK(stats::spearman(x, rev).statistic == doctest::Approx(-1.0));

  Rng rng = make_rng(6, "ks");
  std::vector<double> a(2000), b(2000), c(2000);
  for (auto& v : a) v = uniform01(rng);
  for (auto& v : b) v = uniform01(rng);
  for (auto& v : c) v = uniform01(rng) * 0.8;
  CHECK(stats::ks_two_sample(a, b).p_value > 0.01);
  CHECK(stats::ks_two_sample(a, c).p_value < 1e-6);

  const std::vector<double> probs{0.25, 0.25, 0.5}, good{250, 260, 490}, bad{400, 100, 500};
  CHECK(stats::chi_square_gof(good, probs).p_value > 0.1);
  CHECK(stats::chi_square_gof(bad, probs).p_value < 1e-6);

  double total = 0.0;
  for (int k = 0; k <= 10; ++k) total += stats::beta_binomial_pmf(k, 10, 2.0, 3.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // Beta(1,1) gives the uniform predictive.
  CHECK(stats::beta_binomial_pmf(3, 10, 1.0, 1.0) == doctest::Approx(1.0 / 11));
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(stats::mean(v) == 2.5);
  CHECK(stats::variance(v) == doctest::Approx(5.0 / 3));
}
