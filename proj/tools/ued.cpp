// ued: command-line front end for training, evaluation and game analysis.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ued/dcd_games.hpp"
#include "ued/harness.hpp"

using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

std::vector<double> parse_csv_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--table41", "not a number: '" + tok + "'");
    }
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ued::UedError(ued::ErrorCode::kIoError, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_train(const std::string& config_path, std::optional<std::uint64_t> seed,
              const std::string& out_dir, bool resume) {
  ued::ExperimentConfig cfg = ued::load_config(config_path);
  if (seed) cfg.master_seed = *seed;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  const ued::RunSummary s = ued::run(cfg, resume);
  std::printf("iterations=%llu student_updates=%llu mean_solved_rate=%.6f mean_return=%.6f dir=%s\n",
              static_cast<unsigned long long>(s.iterations),
              static_cast<unsigned long long>(s.student_updates), s.final_eval.mean_solved_rate,
              s.final_eval.mean_return, s.output_dir.c_str());
  return 0;
}

int cmd_eval(const std::string& checkpoint, const std::string& suite_path, int episodes,
             std::uint64_t seed, bool csv) {
  const ued::Checkpoint ck = ued::load_checkpoint(checkpoint);
  const json header = json::parse(ck.header_json);
  const json& extra = header.at("extra");
  const ued::ExperimentConfig cfg = ued::config_from_json(extra.at("config").dump());
  const ued::EvalSuite suite = ued::load_suite(suite_path);
  const ued::EvalReport r = ued::evaluate(ck.params, extra.at("frame_stack").get<int>(), suite, episodes,
                                          cfg.trainer.env, seed);
  std::cout << (csv ? r.to_csv() : r.to_json() + "\n");
  return 0;
}

int cmd_analyze(const std::string& payoffs, const std::string& table41, int sweep, std::uint64_t seed) {
  json out;
  if (!payoffs.empty() || !table41.empty()) {
    ued::DualGame game;
    if (!table41.empty()) {
      const auto v = parse_csv_numbers(table41);
      if (v.size() != 4) throw CLI::ValidationError("--table41", "expects B,p,eps,n");
      game = ued::table41_dual_game(v[0], v[1], v[2], static_cast<int>(v[3]));
    } else {
      // Inline JSON or a path to a JSON file.
      const bool inline_json = payoffs.find('{') != std::string::npos;
      game = ued::dual_game_from_json(inline_json ? payoffs : slurp(payoffs));
    }
    const ued::GameAnalysis a = ued::analyze_game(game);
    out = json::parse(ued::analysis_to_json(game, a));
  }
  if (sweep > 0) {
    const auto t0 = std::chrono::steady_clock::now();
    ued::Rng rng = ued::make_rng(seed, "game-sweep");
    int certified = 0, violations = 0, unsolved = 0;
    double worst_margin = 0.0;
    for (int i = 0; i < sweep; ++i) {
      const ued::DualGame g = ued::random_dual_game(rng);
      try {
        const ued::Equilibrium eq = ued::find_equilibrium(g, 20, 1e-9);
        ++certified;
        const ued::Theorem1Report rep = ued::verify_theorem1(g, eq, 1e-6, false);
        if (!rep.pass) ++violations;
        for (const auto& c : rep.checks) {
          worst_margin = std::max({worst_margin, c.observed.student - c.bound, c.observed.teacher - c.bound});
        }
      } catch (const ued::UedError& e) {
        if (e.code() != ued::ErrorCode::kNoEquilibriumFound) throw;
        ++unsolved;
      }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out["sweep"] = {{"games", sweep},          {"certified", certified},   {"unsolved", unsolved},
                    {"violations", violations}, {"max_excess", worst_margin}, {"seconds", secs},
                    {"pass", violations == 0 && unsolved == 0}};
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

// One JSON object per line and buffer entry, with the replay probability the
// curator would assign at the checkpoint.
int cmd_dump_buffer(const std::string& checkpoint) {
  const ued::Checkpoint ck = ued::load_checkpoint(checkpoint);
  const json header = json::parse(ck.header_json);
  const ued::ExperimentConfig cfg = ued::config_from_json(header.at("extra").at("config").dump());
  ued::Trainer trainer(cfg.trainer, cfg.master_seed);
  trainer.restore_state_json(slurp(ued::state_path_for(checkpoint)));
  for (std::size_t s = 0; s < trainer.student_count(); ++s) {
    const ued::LevelBuffer& buf = trainer.student(s).buffer;
    const std::vector<double> p = buf.size() ? buf.replay_distribution(trainer.episode_count())
                                             : std::vector<double>{};
    for (std::size_t i = 0; i < buf.size(); ++i) {
      const ued::BufferEntry& e = buf.entries()[i];
      json row{{"level_id", e.level_id},     {"level", json::parse(ued::level_to_json(e.level))},
               {"score", e.score},           {"timestamp", e.timestamp},
               {"max_return", e.max_return}, {"p_replay", p[i]}};
      if (trainer.student_count() > 1) row["student"] = s;
      std::cout << row.dump() << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised environment design toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir, checkpoint, suite, payoffs, table41;
  std::uint64_t seed_value = 0;
  bool resume = false, csv = false, print_defaults = false;
  int episodes = 1, sweep = 0;

  auto* train = app.add_subcommand("train", "Run a curriculum experiment");
  auto* config_opt = train->add_option("--config", config_path, "Experiment config (JSON)");
  auto* seed_opt = train->add_option("--seed", seed_value, "Override master_seed");
  train->add_option("--out", out_dir, "Override output_dir");
  train->add_flag("--resume", resume, "Continue from the newest checkpoint in the output dir");
  train->add_flag("--print-defaults", print_defaults, "Print the default config and exit");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a test suite");
  eval->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  eval->add_option("--suite", suite, "Suite file (JSON)")->required();
  eval->add_option("--episodes", episodes, "Episodes per level")->check(CLI::PositiveNumber);
  auto* eval_seed = eval->add_option("--seed", seed_value, "Evaluation seed");
  eval->add_flag("--csv", csv, "CSV instead of JSON");

  auto* analyze = app.add_subcommand("analyze-game", "Minimax regret and dual-curriculum equilibria");
  auto* payoffs_opt = analyze->add_option("--payoffs", payoffs, "Game JSON (inline or path)");
  auto* t41_opt = analyze->add_option("--table41", table41, "B,p,eps,n counterexample game");
  payoffs_opt->excludes(t41_opt);
  analyze->add_option("--sweep", sweep, "Random dual games to check")->check(CLI::NonNegativeNumber);
  analyze->add_option("--seed", seed_value, "Sweep seed");

  auto* dump = app.add_subcommand("dump-buffer", "Print the level buffer stored with a checkpoint");
  dump->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();

  try {
    app.parse(argc, argv);
    if (train->parsed() && !print_defaults && config_opt->count() == 0) {
      throw CLI::RequiredError("--config");
    }
    if (analyze->parsed() && payoffs.empty() && table41.empty() && sweep == 0) {
      throw CLI::ValidationError("analyze-game", "needs --payoffs, --table41 or --sweep");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    if (train->parsed() || std::string(e.what()).find("--config") != std::string::npos) {
      std::cerr << "\n" << ued::config_schema();
    }
    return kExitUsage;
  }

  try {
    if (train->parsed()) {
      if (print_defaults) {
        std::cout << ued::config_to_json(ued::ExperimentConfig{}) << "\n";
        return 0;
      }
      return cmd_train(config_path, seed_opt->count() ? std::optional<std::uint64_t>(seed_value) : std::nullopt,
                       out_dir, resume);
    }
    if (eval->parsed()) return cmd_eval(checkpoint, suite, episodes, eval_seed->count() ? seed_value : 0, csv);
    if (analyze->parsed()) return cmd_analyze(payoffs, table41, sweep, seed_value);
    if (dump->parsed()) return cmd_dump_buffer(checkpoint);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ued::UedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() != ued::ErrorCode::kConfigInvalid) return kExitRuntime;
    std::cerr << "\n" << ued::config_schema();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
