#include "ued/harness.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <regex>
#include <sstream>

#include <json.hpp>

namespace ued {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool uses_buffer(CurriculumKind k) {
  return k == CurriculumKind::kPLR || k == CurriculumKind::kRobustPLR || k == CurriculumKind::kACCEL ||
         k == CurriculumKind::kSAMPLR || k == CurriculumKind::kREPAIRED;
}

bool uses_generator(CurriculumKind k) {
  return k == CurriculumKind::kMinimax || k == CurriculumKind::kPAIRED || k == CurriculumKind::kREPAIRED;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UedError(ErrorCode::kIoError, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw UedError(ErrorCode::kIoError, "cannot write " + p.string());
  out << text;
  if (!out) throw UedError(ErrorCode::kIoError, "short write to " + p.string());
}

std::string metrics_row(const std::vector<std::string>& columns, const IterationRecord& r,
                        std::uint64_t updates, double wallclock_ms) {
  std::string row;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const std::string& c = columns[i];
    std::string v;
    if (c == "iteration") v = std::to_string(r.iteration);
    else if (c == "d") v = std::to_string(r.d);
    else if (c == "level_id") {
      for (std::size_t k = 0; k < r.level_ids.size(); ++k) {
        if (k) v += ';';
        v += std::to_string(r.level_ids[k]);
      }
    } else if (c == "score") v = num(r.score);
    else if (c == "student_return") v = num(r.student_return);
    else if (c == "buffer_size") v = std::to_string(r.buffer_size);
    else if (c == "mean_shortest_path") v = num(r.mean_shortest_path);
    else if (c == "mean_block_count") v = num(r.mean_block_count);
    else if (c == "lzw_action_complexity") v = num(r.lzw_action_complexity);
    else if (c == "wallclock_ms") v = num(wallclock_ms);
    else if (c == "trained") v = r.trained ? "1" : "0";
    else if (c == "student_updates") v = std::to_string(updates);
    else if (c == "solved_rate") v = num(r.solved_rate);
    else if (c == "mean_buffer_score") v = num(r.mean_buffer_score);
    else if (c == "generator_reward") v = num(r.generator_reward);
    else if (c == "edited_levels") v = std::to_string(r.edited_levels);
    else if (c == "inserted_levels") v = std::to_string(r.inserted_levels);
    else if (c == "posterior_alpha") v = num(r.posterior_alpha);
    else if (c == "posterior_beta") v = num(r.posterior_beta);
    else if (c == "fictitious_ice_rate") v = num(r.fictitious_ice_rate);
    else if (c == "real_ice_rate") v = num(r.real_ice_rate);
    else if (c == "trained_apple") v = std::to_string(r.trained_apple);
    else if (c == "trained_fruit_episodes") v = std::to_string(r.trained_fruit_episodes);
    row += v;
    row += i + 1 < columns.size() ? ',' : '\n';
  }
  return row;
}

std::string join_header(const std::vector<std::string>& columns) {
  std::string h;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    h += columns[i];
    h += i + 1 < columns.size() ? ',' : '\n';
  }
  return h;
}

// Newest iter_N.state.json under dir, or -1.
long long latest_checkpoint(const fs::path& dir) {
  if (!fs::exists(dir)) return -1;
  static const std::regex pat(R"(iter_(\d+)\.state\.json)");
  long long best = -1;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = e.path().filename().string();
    if (std::regex_match(name, m, pat)) best = std::max(best, std::stoll(m[1].str()));
  }
  return best;
}

// Keeps the header and rows with iteration < limit.
void truncate_metrics(const fs::path& path, std::uint64_t limit) {
  std::ifstream in(path);
  if (!in) throw UedError(ErrorCode::kIoError, "cannot read " + path.string());
  std::string line, out;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      out += line + '\n';
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const std::uint64_t it = std::stoull(line.substr(0, line.find(',')));
    if (it < limit) out += line + '\n';
  }
  in.close();
  write_file(path, out);
}

std::string checkpoint_header(const ExperimentConfig& config) {
  json extra;
  extra["frame_stack"] = config.trainer.frame_stack;
  extra["config"] = json::parse(config_to_json(config));
  return extra.dump();
}

void write_checkpoint(const fs::path& dir, const ExperimentConfig& config, const Trainer& trainer) {
  const std::string stem = "iter_" + std::to_string(trainer.iteration());
  save_checkpoint((dir / (stem + ".ckpt")).string(), trainer.student().params, trainer.student_updates(),
                  checkpoint_header(config));
  write_file(dir / (stem + ".state.json"), trainer.state_json());
}

}  // namespace

std::vector<std::string> metrics_columns(CurriculumKind kind, EnvKind env) {
  std::vector<std::string> c{"iteration",          "d",
                             "level_id",           "score",
                             "student_return",     "buffer_size",
                             "mean_shortest_path", "mean_block_count",
                             "lzw_action_complexity", "wallclock_ms",
                             "trained",            "student_updates",
                             "solved_rate"};
  if (uses_buffer(kind)) c.push_back("mean_buffer_score");
  if (uses_generator(kind)) c.push_back("generator_reward");
  if (kind == CurriculumKind::kACCEL) {
    c.push_back("edited_levels");
    c.push_back("inserted_levels");
  }
  if (kind == CurriculumKind::kSAMPLR && env == EnvKind::kIcyMaze) {
    for (const char* s : {"posterior_alpha", "posterior_beta", "fictitious_ice_rate", "real_ice_rate"}) {
      c.push_back(s);
    }
  }
  if (env == EnvKind::kFruitChoice) {
    c.push_back("trained_apple");
    c.push_back("trained_fruit_episodes");
  }
  return c;
}

EvalSuite heldout_suite(const ExperimentConfig& config) {
  EvalSuite suite;
  suite.name = "heldout_dr";
  Rng rng = make_rng(config.master_seed, "heldout");
  for (int i = 0; i < config.eval.heldout_levels; ++i) {
    suite.levels.push_back({"heldout_" + std::to_string(i), sample_dr_level(config.trainer.domain, rng)});
  }
  return suite;
}

EvalSuite resolve_suite(const ExperimentConfig& config) {
  return config.eval.suite.empty() ? heldout_suite(config) : load_suite(config.eval.suite);
}

std::string state_path_for(const std::string& checkpoint_path) {
  std::string p = checkpoint_path;
  const std::string ext = ".ckpt";
  if (p.size() >= ext.size() && p.compare(p.size() - ext.size(), ext.size(), ext) == 0) {
    p.resize(p.size() - ext.size());
  }
  return p + ".state.json";
}

RunSummary run(const ExperimentConfig& config, bool resume) {
  config.validate();
  const fs::path out = config.output_dir;
  const fs::path ckpt_dir = out / "checkpoints";
  std::error_code ec;
  fs::create_directories(ckpt_dir, ec);
  if (ec) throw UedError(ErrorCode::kIoError, "cannot create " + ckpt_dir.string() + ": " + ec.message());

  // Load the suite up front so a bad path fails before any training.
  const EvalSuite suite = resolve_suite(config);

  Trainer trainer(config.trainer, config.master_seed);
  const auto columns = metrics_columns(config.trainer.curriculum.kind, config.trainer.domain.kind);
  const fs::path metrics_path = out / "metrics.csv";

  const long long latest = resume ? latest_checkpoint(ckpt_dir) : -1;
  if (latest >= 0 && fs::exists(metrics_path)) {
    trainer.restore_state_json(read_file(ckpt_dir / ("iter_" + std::to_string(latest) + ".state.json")));
    truncate_metrics(metrics_path, trainer.iteration());
  } else {
    write_file(out / "config.json", config_to_json(config) + "\n");
    json schema{{"version", kMetricsSchemaVersion}, {"columns", columns}};
    write_file(out / "metrics.schema.json", schema.dump(2) + "\n");
    write_file(metrics_path, join_header(columns));
    write_checkpoint(ckpt_dir, config, trainer);
  }

  std::ofstream metrics(metrics_path, std::ios::app | std::ios::binary);
  if (!metrics) throw UedError(ErrorCode::kIoError, "cannot append to " + metrics_path.string());

  using clock = std::chrono::steady_clock;
  auto last = clock::now();
  std::vector<double> train_returns;
  while (trainer.student_updates() < config.total_student_updates &&
         (config.max_iterations == 0 || trainer.iteration() < config.max_iterations)) {
    const IterationRecord rec = trainer.run_iteration();
    double ms = 0.0;
    if (config.log_wallclock) {
      const auto now = clock::now();
      ms = std::chrono::duration<double, std::milli>(now - last).count();
      last = now;
    }
    metrics << metrics_row(columns, rec, trainer.student_updates(), ms);
    train_returns.push_back(rec.student_return);
    if (trainer.iteration() % config.eval_interval == 0) {
      metrics.flush();
      write_checkpoint(ckpt_dir, config, trainer);
    }
  }
  metrics.close();
  if (trainer.iteration() % config.eval_interval != 0) write_checkpoint(ckpt_dir, config, trainer);

  RunSummary summary;
  summary.iterations = trainer.iteration();
  summary.student_updates = trainer.student_updates();
  summary.output_dir = out.string();
  summary.final_eval = evaluate(trainer.student().params, config.trainer.frame_stack, suite,
                                config.eval.episodes_per_level, config.trainer.env,
                                derive_seed(config.master_seed, "eval"));
  json report = json::parse(summary.final_eval.to_json());
  report["suite"] = suite.name;
  report["iterations"] = summary.iterations;
  report["student_updates"] = summary.student_updates;
  // Train side of the gap: the last (up to) 100 iterations of this process.
  if (!train_returns.empty()) {
    const std::size_t n = std::min<std::size_t>(100, train_returns.size());
    std::vector<double> tail(train_returns.end() - static_cast<std::ptrdiff_t>(n), train_returns.end());
    std::vector<double> test;
    for (const LevelReport& l : summary.final_eval.levels) test.push_back(l.mean_return);
    report["generalization_gap"] = generalization_gap(tail, test);
  }
  write_file(out / "final_eval.json", report.dump(2) + "\n");
  return summary;
}

}  // namespace ued
