#include "ued/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ued/generators.hpp"

namespace ued {

using nlohmann::json;

std::size_t lzw_complexity(std::span<const int> sequence) {
  if (sequence.empty()) throw UedError(ErrorCode::kEmptySequence, "LZW of an empty sequence");
  std::map<std::vector<int>, int> dict;
  for (int s : sequence) dict.emplace(std::vector<int>{s}, 0);
  std::vector<int> w;
  std::size_t codes = 0;
  for (int s : sequence) {
    std::vector<int> wc = w;
    wc.push_back(s);
    if (dict.count(wc)) {
      w = std::move(wc);
    } else {
      ++codes;
      dict.emplace(std::move(wc), 0);
      w = {s};
    }
  }
  if (!w.empty()) ++codes;
  return codes;
}

EvalSuite parse_suite(const std::string& text) {
  EvalSuite suite;
  try {
    const json j = json::parse(text);
    suite.name = j.value("name", std::string("suite"));
    for (const json& e : j.at("levels")) {
      const std::string name = e.at("name").get<std::string>();
      if (e.contains("rows")) {
        Level lv = maze_from_rows(e.at("rows").get<std::vector<std::string>>(), e.value("facing", 0));
        validate_level(lv);
        suite.levels.push_back({name, std::move(lv)});
      } else if (e.contains("level")) {
        suite.levels.push_back({name, level_from_json(e.at("level").dump())});
      } else if (e.contains("procedural")) {
        if (e.at("procedural").get<std::string>() != "perfect_maze") {
          throw UedError(ErrorCode::kConfigInvalid, "unknown procedural suite entry");
        }
        Rng rng = make_rng(e.at("seed").get<std::uint64_t>(), "perfect-maze");
        const int count = e.at("count").get<int>();
        for (int i = 0; i < count; ++i) {
          Level lv = generate_perfect_maze(e.at("width").get<int>(), e.at("height").get<int>(), rng);
          suite.levels.push_back({name + "-" + std::to_string(i), std::move(lv)});
        }
      } else {
        throw UedError(ErrorCode::kConfigInvalid, "suite entry '" + name + "' has no level");
      }
    }
  } catch (const json::exception& e) {
    throw UedError(ErrorCode::kConfigInvalid, std::string("suite: ") + e.what());
  }
  if (suite.levels.empty()) throw UedError(ErrorCode::kConfigInvalid, "suite has no levels");
  return suite;
}

EvalSuite load_suite(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UedError(ErrorCode::kIoError, "cannot open suite " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_suite(ss.str());
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

EvalReport run_suite(Actor& actor, const EvalSuite& suite, int episodes_per_level,
                     const EnvConfig& env_config, std::uint64_t seed) {
  Env env(env_config);
  EvalReport report;
  std::vector<double> solved;
  std::vector<double> returns;
  for (std::size_t li = 0; li < suite.levels.size(); ++li) {
    auto level = std::make_shared<const Level>(suite.levels[li].level);
    LevelReport lr{suite.levels[li].name, 0.0, 0.0};
    for (int e = 0; e < episodes_per_level; ++e) {
      const std::uint64_t key = li * 1000003ULL + static_cast<std::uint64_t>(e);
      Rng rng = make_rng(seed, "eval-actions", key);
      const EpisodeResult r = run_episode(actor, env, level, derive_seed(seed, "eval-episode", key), rng);
      lr.solved_rate += r.solved ? 1.0 : 0.0;
      lr.mean_return += r.episode_return;
    }
    lr.solved_rate /= episodes_per_level;
    lr.mean_return /= episodes_per_level;
    solved.push_back(lr.solved_rate);
    returns.push_back(lr.mean_return);
    report.levels.push_back(std::move(lr));
  }
  const double n = static_cast<double>(solved.size());
  report.mean_solved_rate = std::accumulate(solved.begin(), solved.end(), 0.0) / n;
  report.mean_return = std::accumulate(returns.begin(), returns.end(), 0.0) / n;
  report.median_solved_rate = median(solved);
  report.median_return = median(returns);
  return report;
}

}  // namespace

EvalReport evaluate(const PolicyParams& params, int frame_stack, const EvalSuite& suite,
                    int episodes_per_level, const EnvConfig& env, std::uint64_t seed) {
  PolicyActor actor(params, frame_stack, true);
  return run_suite(actor, suite, episodes_per_level, env, seed);
}

EvalReport evaluate_actor(Actor& actor, const EvalSuite& suite, int episodes_per_level,
                          const EnvConfig& env, std::uint64_t seed) {
  return run_suite(actor, suite, episodes_per_level, env, seed);
}

std::string EvalReport::to_json() const {
  json lv = json::array();
  for (const auto& l : levels) {
    lv.push_back({{"name", l.name}, {"solved_rate", l.solved_rate}, {"mean_return", l.mean_return}});
  }
  json j{{"levels", lv},
         {"aggregate",
          {{"solved_rate", {{"mean", mean_solved_rate}, {"median", median_solved_rate}}},
           {"return", {{"mean", mean_return}, {"median", median_return}}}}}};
  return j.dump(2);
}

std::string EvalReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "name,solved_rate,mean_return\n";
  for (const auto& l : levels) os << l.name << ',' << l.solved_rate << ',' << l.mean_return << '\n';
  return os.str();
}

double generalization_gap(std::span<const double> train_returns,
                          std::span<const double> test_returns) {
  auto mean = [](std::span<const double> v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  return mean(train_returns) - mean(test_returns);
}

}  // namespace ued
