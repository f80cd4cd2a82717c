#include "ued/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ued {

using nlohmann::json;

namespace {

// Reads fields of one JSON object, remembering which keys were consumed so
// that leftovers can be reported.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      fail(field(key), "has the wrong type");
    }
  }

  template <typename F>
  void get_with(const char* key, F&& parse) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    if (!j_.at(key).is_string()) fail(field(key), "must be a string");
    try {
      parse(j_.at(key).get<std::string>());
    } catch (const UedError& e) {
      fail(field(key), e.what());
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& sub(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }
  std::string field(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail(field(it.key().c_str()), "is not a known field");
    }
  }

  [[noreturn]] static void fail(const std::string& field, const std::string& what) {
    throw UedError(ErrorCode::kConfigInvalid, "config field '" + field + "' " + what);
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ObsMode obs_mode_from_name(const std::string& s) {
  if (s == "egocentric") return ObsMode::kEgocentric;
  if (s == "full_grid") return ObsMode::kFullGrid;
  throw UedError(ErrorCode::kConfigInvalid, "unknown obs_mode '" + s + "'");
}

const char* obs_mode_name(ObsMode m) { return m == ObsMode::kFullGrid ? "full_grid" : "egocentric"; }

void read_env(const json& j, TrainerConfig& t) {
  Reader r(j, "env");
  DomainConfig& d = t.domain;
  EnvConfig& e = t.env;
  r.get_with("kind", [&](const std::string& s) { d.kind = env_kind_from_name(s); });
  r.get("width", d.width);
  r.get("height", d.height);
  r.get_with("layout", [&](const std::string& s) { d.layout = maze_layout_from_name(s); });
  r.get("wall_budget_max", d.wall_budget_max);
  r.get("min_rooms", d.min_rooms);
  r.get("max_rooms", d.max_rooms);
  r.get("apple_prob", d.apple_prob);
  r.get("fruit_min_rooms", d.fruit_min_rooms);
  r.get("fruit_max_rooms", d.fruit_max_rooms);
  r.get("ice_alpha", d.ice_alpha);
  r.get("ice_beta", d.ice_beta);
  r.get("maze_max_steps", e.maze_max_steps);
  r.get("fruit_max_steps", e.fruit_max_steps);
  r.get("reward_apple", e.reward_apple);
  r.get("reward_banana", e.reward_banana);
  r.get_with("obs_mode", [&](const std::string& s) { e.obs_mode = obs_mode_from_name(s); });
  r.get("view_size", e.view_size);
  r.finish();
}

void read_curriculum(const json& j, CurriculumConfig& c) {
  Reader r(j, "curriculum");
  r.get_with("kind", [&](const std::string& s) { c.kind = curriculum_kind_from_name(s); });
  r.get("episodes_per_iteration", c.episodes_per_iteration);
  r.get("train_set_size", c.train_set_size);
  r.get("edits_per_level", c.edits_per_level);
  r.get_with("edit_criterion", [&](const std::string& s) { c.edit_criterion = edit_criterion_from_name(s); });
  r.get("initial_fill", c.initial_fill);
  r.get_with("accel_generator", [&](const std::string& s) { c.accel_generator = maze_layout_from_name(s); });
  r.get("generator_hidden", c.generator_hidden);
  r.get("generator_entropy_coef", c.generator_entropy_coef);
  r.get("generator_wall_budget", c.generator_wall_budget);
  r.get("regret_episodes", c.regret_episodes);
  r.get_with("grounding", [&](const std::string& s) {
    if (s == "none") c.grounding = Grounding::kNone;
    else if (s == "naive") c.grounding = Grounding::kNaive;
    else throw UedError(ErrorCode::kConfigInvalid, "unknown grounding '" + s + "'");
  });
  if (r.has("prior")) {
    Reader p(r.sub("prior"), "curriculum.prior");
    p.get("ice_alpha", c.prior.ice_alpha);
    p.get("ice_beta", c.prior.ice_beta);
    p.get("apple_prob", c.prior.apple_prob);
    p.finish();
  }
  r.get("act_on_fictitious", c.act_on_fictitious);
  r.finish();
}

void read_ppo(const json& j, PPOConfig& p) {
  Reader r(j, "ppo");
  r.get("gamma", p.gamma);
  r.get("gae_lambda", p.gae_lambda);
  r.get("clip_eps", p.clip_eps);
  r.get("epochs", p.epochs);
  r.get("minibatches", p.minibatches);
  r.get("learning_rate", p.learning_rate);
  r.get("value_coef", p.value_coef);
  r.get("entropy_coef", p.entropy_coef);
  r.get("max_grad_norm", p.max_grad_norm);
  r.get("clip_value", p.clip_value);
  r.get("normalize_advantages", p.normalize_advantages);
  r.get_with("optimizer", [&](const std::string& s) {
    if (s == "adam") p.optimizer = OptimizerKind::kAdam;
    else if (s == "sgd") p.optimizer = OptimizerKind::kSgd;
    else throw UedError(ErrorCode::kConfigInvalid, "unknown optimizer '" + s + "'");
  });
  r.get("adam_beta1", p.adam_beta1);
  r.get("adam_beta2", p.adam_beta2);
  r.get("adam_eps", p.adam_eps);
  r.finish();
}

void read_replay(const json& j, ReplayConfig& c) {
  Reader r(j, "replay");
  r.get("capacity", c.capacity);
  r.get("temperature", c.temperature);
  r.get("staleness_coef", c.staleness_coef);
  r.get_with("prioritization", [&](const std::string& s) { c.prioritization = prioritization_from_name(s); });
  r.get("replay_rate", c.replay_rate);
  r.get("anneal", c.anneal);
  r.get_with("score", [&](const std::string& s) { c.score_kind = score_kind_from_name(s); });
  r.finish();
}

}  // namespace

void ExperimentConfig::validate() const {
  trainer.validate();
  if (eval_interval < 1) throw UedError(ErrorCode::kConfigInvalid, "config field 'eval_interval' must be >= 1");
  if (output_dir.empty()) throw UedError(ErrorCode::kConfigInvalid, "config field 'output_dir' is empty");
  if (eval.episodes_per_level < 1) {
    throw UedError(ErrorCode::kConfigInvalid, "config field 'eval.episodes_per_level' must be >= 1");
  }
  if (eval.suite.empty() && eval.heldout_levels < 1) {
    throw UedError(ErrorCode::kConfigInvalid, "config field 'eval.heldout_levels' must be >= 1");
  }
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw UedError(ErrorCode::kConfigInvalid, std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  Reader r(j, "");
  if (r.has("env")) read_env(r.sub("env"), c.trainer);
  if (r.has("curriculum")) read_curriculum(r.sub("curriculum"), c.trainer.curriculum);
  if (r.has("ppo")) read_ppo(r.sub("ppo"), c.trainer.ppo);
  if (r.has("replay")) read_replay(r.sub("replay"), c.trainer.replay);
  if (r.has("model")) {
    Reader m(r.sub("model"), "model");
    m.get("hidden_dims", c.trainer.hidden_dims);
    m.get("detach_value_encoder", c.trainer.detach_value_encoder);
    m.get("frame_stack", c.trainer.frame_stack);
    m.get("max_mc_dense", c.trainer.max_mc_dense);
    m.finish();
  }
  if (r.has("eval")) {
    Reader e(r.sub("eval"), "eval");
    e.get("suite", c.eval.suite);
    e.get("episodes_per_level", c.eval.episodes_per_level);
    e.get("heldout_levels", c.eval.heldout_levels);
    e.finish();
  }
  r.get("total_student_updates", c.total_student_updates);
  r.get("max_iterations", c.max_iterations);
  r.get("eval_interval", c.eval_interval);
  r.get("master_seed", c.master_seed);
  r.get("output_dir", c.output_dir);
  r.get("log_wallclock", c.log_wallclock);
  r.finish();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UedError(ErrorCode::kIoError, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  const TrainerConfig& t = c.trainer;
  const DomainConfig& d = t.domain;
  const EnvConfig& e = t.env;
  const CurriculumConfig& cc = t.curriculum;
  const PPOConfig& p = t.ppo;
  const ReplayConfig& rp = t.replay;
  json j;
  j["env"] = {{"kind", env_kind_name(d.kind)},
              {"width", d.width},
              {"height", d.height},
              {"layout", maze_layout_name(d.layout)},
              {"wall_budget_max", d.wall_budget_max},
              {"min_rooms", d.min_rooms},
              {"max_rooms", d.max_rooms},
              {"apple_prob", d.apple_prob},
              {"fruit_min_rooms", d.fruit_min_rooms},
              {"fruit_max_rooms", d.fruit_max_rooms},
              {"ice_alpha", d.ice_alpha},
              {"ice_beta", d.ice_beta},
              {"maze_max_steps", e.maze_max_steps},
              {"fruit_max_steps", e.fruit_max_steps},
              {"reward_apple", e.reward_apple},
              {"reward_banana", e.reward_banana},
              {"obs_mode", obs_mode_name(e.obs_mode)},
              {"view_size", e.view_size}};
  j["curriculum"] = {{"kind", curriculum_kind_name(cc.kind)},
                     {"episodes_per_iteration", cc.episodes_per_iteration},
                     {"train_set_size", cc.train_set_size},
                     {"edits_per_level", cc.edits_per_level},
                     {"edit_criterion", edit_criterion_name(cc.edit_criterion)},
                     {"initial_fill", cc.initial_fill},
                     {"accel_generator", maze_layout_name(cc.accel_generator)},
                     {"generator_hidden", cc.generator_hidden},
                     {"generator_entropy_coef", cc.generator_entropy_coef},
                     {"generator_wall_budget", cc.generator_wall_budget},
                     {"regret_episodes", cc.regret_episodes},
                     {"grounding", cc.grounding == Grounding::kNaive ? "naive" : "none"},
                     {"prior",
                      {{"ice_alpha", cc.prior.ice_alpha},
                       {"ice_beta", cc.prior.ice_beta},
                       {"apple_prob", cc.prior.apple_prob}}},
                     {"act_on_fictitious", cc.act_on_fictitious}};
  j["ppo"] = {{"gamma", p.gamma},
              {"gae_lambda", p.gae_lambda},
              {"clip_eps", p.clip_eps},
              {"epochs", p.epochs},
              {"minibatches", p.minibatches},
              {"learning_rate", p.learning_rate},
              {"value_coef", p.value_coef},
              {"entropy_coef", p.entropy_coef},
              {"max_grad_norm", p.max_grad_norm},
              {"clip_value", p.clip_value},
              {"normalize_advantages", p.normalize_advantages},
              {"optimizer", p.optimizer == OptimizerKind::kSgd ? "sgd" : "adam"},
              {"adam_beta1", p.adam_beta1},
              {"adam_beta2", p.adam_beta2},
              {"adam_eps", p.adam_eps}};
  j["replay"] = {{"capacity", rp.capacity},
                 {"temperature", rp.temperature},
                 {"staleness_coef", rp.staleness_coef},
                 {"prioritization", prioritization_name(rp.prioritization)},
                 {"replay_rate", rp.replay_rate},
                 {"anneal", rp.anneal},
                 {"score", score_kind_name(rp.score_kind)}};
  j["model"] = {{"hidden_dims", t.hidden_dims},
                {"detach_value_encoder", t.detach_value_encoder},
                {"frame_stack", t.frame_stack},
                {"max_mc_dense", t.max_mc_dense}};
  j["eval"] = {{"suite", c.eval.suite},
               {"episodes_per_level", c.eval.episodes_per_level},
               {"heldout_levels", c.eval.heldout_levels}};
  j["total_student_updates"] = c.total_student_updates;
  j["max_iterations"] = c.max_iterations;
  j["eval_interval"] = c.eval_interval;
  j["master_seed"] = c.master_seed;
  j["output_dir"] = c.output_dir;
  j["log_wallclock"] = c.log_wallclock;
  return j.dump(2);
}

const char* config_schema() {
  return R"(config schema (JSON object; every field optional, defaults shown by `ued train --print-defaults`):
  env:        kind (maze|icy_maze|fruit_choice), width, height,
              layout (random_walls|empty_room|multi_room|perfect_maze), wall_budget_max,
              min_rooms, max_rooms, apple_prob, fruit_min_rooms, fruit_max_rooms,
              ice_alpha, ice_beta, maze_max_steps, fruit_max_steps, reward_apple,
              reward_banana, obs_mode (egocentric|full_grid), view_size
  curriculum: kind (dr|plr|robust_plr|minimax|paired|repaired|accel|samplr),
              episodes_per_iteration, train_set_size, edits_per_level,
              edit_criterion (hard|batch), initial_fill, accel_generator,
              generator_hidden, generator_entropy_coef, generator_wall_budget,
              regret_episodes, grounding (none|naive),
              prior {ice_alpha, ice_beta, apple_prob}, act_on_fictitious
  ppo:        gamma, gae_lambda, clip_eps, epochs, minibatches, learning_rate,
              value_coef, entropy_coef, max_grad_norm, clip_value,
              normalize_advantages, optimizer (adam|sgd), adam_beta1, adam_beta2, adam_eps
  replay:     capacity, temperature, staleness_coef,
              prioritization (rank|proportional|greedy), replay_rate, anneal,
              score (policy_entropy|min_margin|least_confidence|one_step_td|gae|
                     l1_value_loss|pvl|max_mc)
  model:      hidden_dims, detach_value_encoder, frame_stack, max_mc_dense
  eval:       suite (path), episodes_per_level, heldout_levels
  total_student_updates, max_iterations, eval_interval, master_seed,
  output_dir, log_wallclock
)";
}

}  // namespace ued
