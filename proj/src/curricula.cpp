#include "ued/curricula.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ued/metrics.hpp"

namespace ued {

using nlohmann::json;

namespace {

constexpr std::pair<CurriculumKind, std::string_view> kKindNames[] = {
    {CurriculumKind::kDR, "dr"},
    {CurriculumKind::kPLR, "plr"},
    {CurriculumKind::kRobustPLR, "robust_plr"},
    {CurriculumKind::kMinimax, "minimax"},
    {CurriculumKind::kPAIRED, "paired"},
    {CurriculumKind::kREPAIRED, "repaired"},
    {CurriculumKind::kACCEL, "accel"},
    {CurriculumKind::kSAMPLR, "samplr"},
};

bool uses_generator(CurriculumKind k) {
  return k == CurriculumKind::kMinimax || k == CurriculumKind::kPAIRED ||
         k == CurriculumKind::kREPAIRED;
}

bool needs_dists(ScoreKind k) {
  return k == ScoreKind::kPolicyEntropy || k == ScoreKind::kMinMargin ||
         k == ScoreKind::kLeastConfidence;
}

std::string rng_state(const Rng& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

void load_rng(Rng& rng, const std::string& state) {
  std::istringstream is(state);
  is >> rng;
  if (!is) throw UedError(ErrorCode::kConfigInvalid, "corrupt rng state");
}

json vec_to_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vec_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
  return v;
}

}  // namespace

std::string_view curriculum_kind_name(CurriculumKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "dr";
}

CurriculumKind curriculum_kind_from_name(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw UedError(ErrorCode::kConfigInvalid, "unknown curriculum '" + std::string(name) + "'");
}

std::string_view edit_criterion_name(EditCriterion c) {
  return c == EditCriterion::kHard ? "hard" : "batch";
}

EditCriterion edit_criterion_from_name(std::string_view name) {
  if (name == "hard") return EditCriterion::kHard;
  if (name == "batch") return EditCriterion::kBatch;
  throw UedError(ErrorCode::kConfigInvalid, "unknown edit criterion '" + std::string(name) + "'");
}

void CurriculumConfig::validate(const DomainConfig& domain) const {
  auto fail = [](const std::string& what) {
    throw UedError(ErrorCode::kConfigInvalid, "curriculum." + what);
  };
  if (episodes_per_iteration < 1) fail("episodes_per_iteration must be >= 1");
  if (edits_per_level < 1) fail("edits_per_level must be >= 1");
  if (!(initial_fill >= 0.0 && initial_fill <= 1.0)) fail("initial_fill must be in [0,1]");
  if (generator_wall_budget < 0) fail("generator_wall_budget must be >= 0");
  if (regret_episodes < 1) fail("regret_episodes must be >= 1");
  for (int h : generator_hidden) {
    if (h <= 0) fail("generator_hidden entries must be positive");
  }
  if (uses_generator(kind) && domain.kind == EnvKind::kFruitChoice) {
    fail("kind: generator-based curricula need a grid domain");
  }
  if (!(prior.apple_prob >= 0.0 && prior.apple_prob <= 1.0)) fail("prior.apple_prob must be in [0,1]");
  if (!(prior.ice_alpha > 0.0 && prior.ice_beta > 0.0)) fail("prior ice parameters must be positive");
}

void TrainerConfig::validate() const {
  domain.validate();
  curriculum.validate(domain);
  ppo.validate();
  replay.validate();
  if (frame_stack < 1) throw UedError(ErrorCode::kConfigInvalid, "frame_stack must be >= 1");
  for (int h : hidden_dims) {
    if (h <= 0) throw UedError(ErrorCode::kConfigInvalid, "hidden_dims entries must be positive");
  }
}

// ---------------------------------------------------------------- generator

int generator_action_count(const DomainConfig& domain) {
  return (domain.width - 2) * (domain.height - 2);
}

int generator_input_dim(const DomainConfig& domain, int wall_budget) {
  return generator_action_count(domain) * 4 + wall_budget + 2;
}

GeneratedLevel generate_level(const PolicyParams& generator, const DomainConfig& domain,
                              int wall_budget, Rng& rng) {
  const int iw = domain.width - 2;
  const int n = generator_action_count(domain);
  const int steps = wall_budget + 2;
  enum : std::uint8_t { kEmpty = 0, kWall = 1, kGoal = 2, kAgent = 3 };
  std::vector<std::uint8_t> grid(static_cast<std::size_t>(n), kEmpty);
  GeneratedLevel out;
  Trajectory& tr = out.traj;
  Eigen::VectorXd obs = Eigen::VectorXd::Zero(generator_input_dim(domain, wall_budget));
  int goal = -1;
  int agent = -1;
  for (int t = 0; t < steps; ++t) {
    obs.setZero();
    for (int i = 0; i < n; ++i) obs[i * 4 + grid[static_cast<std::size_t>(i)]] = 1.0;
    obs[n * 4 + t] = 1.0;
    const ForwardOut fw = forward(generator, obs);
    const ActionSample a = sample_action(fw, rng);
    tr.obs.push_back(obs);
    tr.actions.push_back(a.action);
    tr.log_probs.push_back(a.log_prob);
    tr.values.push_back(fw.value);
    tr.rewards.push_back(0.0);
    tr.dones.push_back(t + 1 == steps ? 1 : 0);
    auto& cell = grid[static_cast<std::size_t>(a.action)];
    if (t < wall_budget) {
      if (cell == kEmpty) cell = kWall;
    } else if (t == wall_budget) {
      cell = kGoal;
      goal = a.action;
    } else if (cell == kGoal) {
      std::vector<int> free;
      for (int i = 0; i < n; ++i) {
        if (grid[static_cast<std::size_t>(i)] == kEmpty) free.push_back(i);
      }
      if (free.empty()) {
        for (int i = 0; i < n; ++i) {
          if (grid[static_cast<std::size_t>(i)] == kWall) free.push_back(i);
        }
      }
      agent = free[uniform_index(rng, free.size())];
      grid[static_cast<std::size_t>(agent)] = kAgent;
    } else {
      cell = kAgent;
      agent = a.action;
    }
  }
  auto to_pos = [&](int i) { return Pos{i % iw + 1, i / iw + 1}; };
  Level level = make_empty_maze(domain.width, domain.height, to_pos(agent),
                                uniform_int(rng, 0, 3), to_pos(goal));
  for (int i = 0; i < n; ++i) {
    if (grid[static_cast<std::size_t>(i)] == kWall) level.cells[level.index(to_pos(i))] = Cell::kWall;
  }
  if (domain.kind == EnvKind::kIcyMaze) {
    level.kind = EnvKind::kIcyMaze;
    resample_ice(level, domain.ice_alpha, domain.ice_beta, rng);
  }
  level.seed = rng();
  validate_level(level);
  out.level = std::move(level);
  return out;
}

double relative_regret(const Level& level, Actor& protagonist, Actor& antagonist,
                       int episodes, const EnvConfig& env_config, std::uint64_t seed) {
  Env env(env_config);
  auto shared = std::make_shared<const Level>(level);
  double total_a = 0.0;
  double total_p = 0.0;
  for (int e = 0; e < episodes; ++e) {
    const std::uint64_t episode_seed = derive_seed(seed, "regret-episode", static_cast<std::uint64_t>(e));
    // Same action stream for both so identical policies give identical returns.
    Rng rp = make_rng(seed, "regret-actions", static_cast<std::uint64_t>(e));
    Rng ra = make_rng(seed, "regret-actions", static_cast<std::uint64_t>(e));
    total_p += run_episode(protagonist, env, shared, episode_seed, rp).episode_return;
    total_a += run_episode(antagonist, env, shared, episode_seed, ra).episode_return;
  }
  return (total_a - total_p) / static_cast<double>(episodes);
}

// ---------------------------------------------------------------- trainer

Trainer::Trainer(TrainerConfig config, std::uint64_t master_seed)
    : config_(std::move(config)),
      master_seed_(master_seed),
      env_(config_.env),
      fictitious_env_(config_.env),
      rng_levels_(make_rng(master_seed, "levels")),
      rng_replay_(make_rng(master_seed, "replay-decision")),
      rng_env_(make_rng(master_seed, "env")),
      rng_actions_(make_rng(master_seed, "actions")),
      rng_ppo_(make_rng(master_seed, "ppo")),
      rng_edits_(make_rng(master_seed, "edits")),
      rng_generator_(make_rng(master_seed, "generator")),
      rng_ground_(make_rng(master_seed, "grounding")) {
  config_.validate();
  const CurriculumConfig& cc = config_.curriculum;
  score_params_.kind = config_.replay.score_kind;
  score_params_.gamma = config_.ppo.gamma;
  score_params_.lambda = config_.ppo.gae_lambda;
  score_params_.max_mc_dense = config_.max_mc_dense;
  rollout_.frame_stack = config_.frame_stack;
  rollout_.record_dists = needs_dists(score_params_.kind);

  Architecture arch;
  arch.input_dim = static_cast<int>(observation_encoding_size(
                       config_.domain.kind, config_.env, config_.domain.width, config_.domain.height)) *
                   config_.frame_stack;
  arch.hidden_dims = config_.hidden_dims;
  arch.action_count = action_count(config_.domain.kind);
  arch.detach_value_encoder = config_.detach_value_encoder;
  const std::size_t n_students =
      cc.kind == CurriculumKind::kPAIRED || cc.kind == CurriculumKind::kREPAIRED ? 2 : 1;
  for (std::size_t i = 0; i < n_students; ++i) {
    Rng init = make_rng(master_seed, "policy-init", i);
    students_.push_back(StudentState{init_params(arch, init), AdamState{}, LevelBuffer(config_.replay), 0});
  }
  if (uses_generator(cc.kind)) {
    Architecture garch;
    garch.input_dim = generator_input_dim(config_.domain, cc.generator_wall_budget);
    garch.hidden_dims = cc.generator_hidden;
    garch.action_count = generator_action_count(config_.domain);
    Rng init = make_rng(master_seed, "generator-init");
    generator_ = GeneratorState{init_params(garch, init), AdamState{}, 0};
  }
  if (cc.train_set_size > 0) {
    Rng set_rng = make_rng(master_seed, "train-set");
    for (std::size_t i = 0; i < cc.train_set_size; ++i) {
      train_set_.push_back(sample_dr_level(config_.domain, set_rng));
      level_log_.push_back({i, std::nullopt, "train"});
    }
    train_seen_.assign(cc.train_set_size, 0);
  }
  next_level_id_ = cc.train_set_size;
  if (cc.kind == CurriculumKind::kACCEL) prefill_accel();
}

std::uint64_t Trainer::new_level_id(std::optional<std::uint64_t> parent, const std::string& origin) {
  const std::uint64_t id = next_level_id_++;
  level_log_.push_back({id, parent, origin});
  return id;
}

std::pair<std::uint64_t, Level> Trainer::fresh_level() {
  const CurriculumConfig& cc = config_.curriculum;
  if (!train_set_.empty()) {
    std::size_t idx = 0;
    if (cc.kind == CurriculumKind::kDR || seen_count_ >= train_set_.size()) {
      idx = uniform_index(rng_levels_, train_set_.size());
    } else {
      std::size_t k = uniform_index(rng_levels_, train_set_.size() - seen_count_);
      for (idx = 0; idx < train_set_.size(); ++idx) {
        if (!train_seen_[idx] && k-- == 0) break;
      }
    }
    if (!train_seen_[idx]) {
      train_seen_[idx] = 1;
      ++seen_count_;
    }
    return {idx, train_set_[idx]};
  }
  if (cc.kind == CurriculumKind::kACCEL) {
    DomainConfig dom = config_.domain;
    if (dom.kind != EnvKind::kFruitChoice) dom.layout = cc.accel_generator;
    Level level = sample_dr_level(dom, rng_levels_);
    return {new_level_id(std::nullopt, "generator"), std::move(level)};
  }
  Level level = sample_dr_level(config_.domain, rng_levels_);
  return {new_level_id(std::nullopt, "dr"), std::move(level)};
}

Level Trainer::ground(const Level& level) {
  if (config_.curriculum.grounding == Grounding::kNaive) {
    return naive_ground(level, config_.curriculum.prior, rng_ground_);
  }
  return level;
}

EpisodeResult Trainer::play(StudentState& student, const Level& level, bool record_dists) {
  RolloutOptions opts = rollout_;
  opts.record_dists = opts.record_dists || record_dists;
  const std::uint64_t seed = rng_env_();
  return collect_episode(student.params, env_, std::make_shared<const Level>(ground(level)), seed,
                         rng_actions_, opts);
}

double Trainer::score_episode(const StudentState& student, std::uint64_t level_id,
                              const EpisodeResult& ep) const {
  std::optional<double> max_return;
  if (score_params_.kind == ScoreKind::kMaxMC) {
    double best = ep.episode_return;
    if (auto idx = student.buffer.find(level_id)) {
      best = std::max(best, student.buffer.entries()[*idx].max_return);
    }
    max_return = best;
  }
  return score_trajectory(ep.traj, score_params_, max_return);
}

bool Trainer::insert_if_meets_threshold(StudentState& student, std::uint64_t id,
                                        const Level& level, double score,
                                        double episode_return) {
  if (!student.buffer.full() && score < student.buffer.insertion_threshold(episode_count_)) {
    return false;
  }
  const UpdateOutcome out = student.buffer.update(id, level, score, episode_count_, episode_return);
  return out != UpdateOutcome::kRejected;
}

void Trainer::train(StudentState& student, const std::vector<Trajectory>& trajectories) {
  const Batch batch = build_batch(trajectories, config_.ppo);
  ppo_update(student.params, student.opt, batch, config_.ppo, rng_ppo_);
  student.updates += 1;
}

void Trainer::train_generator(std::vector<GeneratedLevel>& generated,
                              const std::vector<double>& rewards) {
  std::vector<Trajectory> trajs;
  for (std::size_t i = 0; i < generated.size(); ++i) {
    Trajectory tr = generated[i].traj;
    tr.rewards.back() = rewards[i];
    tr.episode_return = rewards[i];
    trajs.push_back(std::move(tr));
  }
  PPOConfig cfg = config_.ppo;
  cfg.entropy_coef = config_.curriculum.generator_entropy_coef;
  const Batch batch = build_batch(trajs, cfg);
  ppo_update(generator_->params, generator_->opt, batch, cfg, rng_ppo_);
  generator_->updates += 1;
}

void Trainer::prefill_accel() {
  StudentState& s = students_[0];
  const auto target = static_cast<std::size_t>(
      std::floor(static_cast<double>(config_.replay.capacity) * config_.curriculum.initial_fill));
  while (s.buffer.size() < target) {
    auto [id, level] = fresh_level();
    level_log_.back().origin = "prefill";
    const EpisodeResult ep = play(s, level, false);
    episode_count_ += 1;
    s.buffer.update(id, level, score_episode(s, id, ep), episode_count_, ep.episode_return);
  }
  prefilled_ = true;
}

void Trainer::finish_record(IterationRecord& rec, const std::vector<Episode>& episodes,
                            const StudentState& student) const {
  rec.buffer_size = student.buffer.size();
  rec.mean_buffer_score = student.buffer.mean_score();
  if (episodes.empty()) return;
  const double n = static_cast<double>(episodes.size());
  for (const Episode& ep : episodes) {
    rec.level_ids.push_back(ep.level_id);
    rec.score += ep.score / n;
    rec.student_return += ep.result.episode_return / n;
    rec.solved_rate += (ep.result.solved ? 1.0 : 0.0) / n;
    rec.env_steps += static_cast<std::uint64_t>(ep.result.length);
    if (ep.level->is_grid()) {
      rec.mean_shortest_path += shortest_path_length(*ep.level) / n;
      rec.mean_block_count += ep.level->interior_wall_count() / n;
    }
    if (!ep.result.actions.empty()) {
      rec.lzw_action_complexity += static_cast<double>(lzw_complexity(ep.result.actions)) / n;
    }
  }
}

IterationRecord Trainer::run_iteration() {
  IterationRecord rec;
  switch (config_.curriculum.kind) {
    case CurriculumKind::kDR: rec = run_dr_iteration(); break;
    case CurriculumKind::kPLR:
    case CurriculumKind::kRobustPLR:
    case CurriculumKind::kACCEL:
    case CurriculumKind::kSAMPLR: rec = run_buffered_iteration(); break;
    case CurriculumKind::kMinimax:
    case CurriculumKind::kPAIRED: rec = run_generator_iteration(); break;
    case CurriculumKind::kREPAIRED: rec = run_repaired_iteration(); break;
  }
  rec.iteration = iteration_;
  ++iteration_;
  return rec;
}

IterationRecord Trainer::run_dr_iteration() {
  StudentState& s = students_[0];
  IterationRecord rec;
  std::vector<Episode> episodes;
  std::vector<Trajectory> trajs;
  for (int b = 0; b < config_.curriculum.episodes_per_iteration; ++b) {
    auto [id, level] = fresh_level();
    Episode ep;
    ep.level_id = id;
    ep.level = std::make_shared<const Level>(level);
    ep.result = play(s, level, false);
    ep.score = score_episode(s, id, ep.result);
    episode_count_ += 1;
    trajs.push_back(ep.result.traj);
    if (level.kind == EnvKind::kFruitChoice) {
      rec.trained_fruit_episodes += 1;
      rec.trained_apple += level.correct_fruit == Fruit::kApple ? 1 : 0;
    }
    episodes.push_back(std::move(ep));
  }
  train(s, trajs);
  rec.trained = true;
  finish_record(rec, episodes, s);
  return rec;
}

IterationRecord Trainer::run_buffered_iteration() {
  const CurriculumConfig& cc = config_.curriculum;
  StudentState& s = students_[0];
  IterationRecord rec;
  std::optional<std::size_t> train_size;
  if (!train_set_.empty()) train_size = train_set_.size();
  const bool d = replay_decision(s.buffer, seen_count_, train_size, config_.replay, rng_replay_);
  rec.d = d ? 1 : 0;
  const bool samplr = cc.kind == CurriculumKind::kSAMPLR;
  const bool accel = cc.kind == CurriculumKind::kACCEL;

  std::vector<Episode> episodes;
  std::vector<Trajectory> trajs;
  double alpha_total = 0.0;
  double beta_total = 0.0;
  double fict_ice_total = 0.0;
  double real_ice_total = 0.0;
  for (int b = 0; b < cc.episodes_per_iteration; ++b) {
    Episode ep;
    Level level;
    if (d) {
      const std::size_t idx = s.buffer.sample(episode_count_, rng_replay_);
      ep.level_id = s.buffer.entries()[idx].level_id;
      level = s.buffer.entries()[idx].level;
    } else {
      auto fresh = fresh_level();
      ep.level_id = fresh.first;
      level = std::move(fresh.second);
    }
    ep.level = std::make_shared<const Level>(level);
    std::optional<Fruit> effective_fruit;
    if (samplr && d) {
      const std::uint64_t seed = rng_env_();
      FictitiousEpisode fe = collect_fictitious_episode(
          s.params, env_, fictitious_env_, ep.level, seed, cc.prior, rng_actions_, rollout_,
          cc.act_on_fictitious);
      alpha_total += fe.belief.post_alpha();
      beta_total += fe.belief.post_beta();
      fict_ice_total += fe.fictitious_ice_rate;
      real_ice_total += fe.real_ice_rate;
      effective_fruit = fe.effective_fruit;
      ep.result = std::move(fe.result);
    } else {
      ep.result = play(s, level, false);
      if (level.kind == EnvKind::kFruitChoice) effective_fruit = level.correct_fruit;
    }
    ep.score = score_episode(s, ep.level_id, ep.result);
    episode_count_ += 1;
    const bool trains = d || cc.kind == CurriculumKind::kPLR;
    if (trains && level.kind == EnvKind::kFruitChoice && effective_fruit) {
      rec.trained_fruit_episodes += 1;
      rec.trained_apple += *effective_fruit == Fruit::kApple ? 1 : 0;
    }
    episodes.push_back(std::move(ep));
  }
  for (const Episode& ep : episodes) {
    if (accel && !d) {
      rec.inserted_levels += insert_if_meets_threshold(s, ep.level_id, *ep.level, ep.score,
                                                       ep.result.episode_return) ? 1 : 0;
    } else {
      s.buffer.update(ep.level_id, *ep.level, ep.score, episode_count_, ep.result.episode_return);
    }
  }
  if (d || cc.kind == CurriculumKind::kPLR) {
    for (const Episode& ep : episodes) trajs.push_back(ep.result.traj);
    train(s, trajs);
    rec.trained = true;
  }
  if (samplr && d) {
    const double n = static_cast<double>(episodes.size());
    rec.posterior_alpha = alpha_total / n;
    rec.posterior_beta = beta_total / n;
    rec.fictitious_ice_rate = fict_ice_total / n;
    rec.real_ice_rate = real_ice_total / n;
  }

  if (accel && d) {
    std::vector<std::size_t> targets;
    if (cc.edit_criterion == EditCriterion::kBatch) {
      targets.resize(episodes.size());
      std::iota(targets.begin(), targets.end(), std::size_t{0});
    } else {
      std::size_t best = 0;
      for (std::size_t i = 1; i < episodes.size(); ++i) {
        const double hi = episodes[i].score - episodes[i].result.episode_return;
        const double hb = episodes[best].score - episodes[best].result.episode_return;
        if (hi > hb) best = i;
      }
      targets.push_back(best);
    }
    for (std::size_t t : targets) {
      Level child = *episodes[t].level;
      for (int e = 0; e < cc.edits_per_level; ++e) {
        try {
          child = apply_edit(child, sample_edit(child, rng_edits_), rng_edits_);
        } catch (const UedError& err) {
          if (err.code() != ErrorCode::kInvalidEdit && err.code() != ErrorCode::kInvalidLevel) throw;
        }
      }
      child.seed = rng_edits_();
      const std::uint64_t id = new_level_id(episodes[t].level_id, "edit");
      const EpisodeResult ep = play(s, child, false);
      episode_count_ += 1;
      rec.edited_levels += 1;
      rec.inserted_levels +=
          insert_if_meets_threshold(s, id, child, score_episode(s, id, ep), ep.episode_return) ? 1 : 0;
    }
  }
  finish_record(rec, episodes, s);
  return rec;
}

IterationRecord Trainer::run_generator_iteration() {
  const CurriculumConfig& cc = config_.curriculum;
  const bool paired = cc.kind == CurriculumKind::kPAIRED;
  IterationRecord rec;
  std::vector<GeneratedLevel> generated;
  std::vector<double> rewards;
  std::vector<Episode> episodes;
  std::vector<Trajectory> protagonist;
  std::vector<Trajectory> antagonist;
  for (int b = 0; b < cc.episodes_per_iteration; ++b) {
    generated.push_back(generate_level(generator_->params, config_.domain, cc.generator_wall_budget,
                                       rng_generator_));
    const Level& level = generated.back().level;
    Episode ep;
    ep.level_id = new_level_id(std::nullopt, "generator");
    ep.level = std::make_shared<const Level>(level);
    ep.result = play(students_[0], level, false);
    ep.score = score_episode(students_[0], ep.level_id, ep.result);
    episode_count_ += 1;
    double reward = -ep.result.episode_return;
    if (paired) {
      const EpisodeResult anta = play(students_[1], level, false);
      reward = anta.episode_return - ep.result.episode_return;
      antagonist.push_back(anta.traj);
    }
    rewards.push_back(reward);
    rec.generator_reward += reward / cc.episodes_per_iteration;
    protagonist.push_back(ep.result.traj);
    episodes.push_back(std::move(ep));
  }
  train(students_[0], protagonist);
  if (paired) train(students_[1], antagonist);
  train_generator(generated, rewards);
  rec.trained = true;
  finish_record(rec, episodes, students_[0]);
  return rec;
}

IterationRecord Trainer::run_repaired_iteration() {
  const CurriculumConfig& cc = config_.curriculum;
  StudentState& pro = students_[0];
  StudentState& ant = students_[1];
  IterationRecord rec;
  const bool d = replay_decision(pro.buffer, seen_count_, std::nullopt, config_.replay, rng_replay_);
  rec.d = d ? 1 : 0;
  std::vector<Episode> episodes;
  if (!d) {
    std::vector<GeneratedLevel> generated;
    std::vector<double> rewards;
    for (int b = 0; b < cc.episodes_per_iteration; ++b) {
      generated.push_back(generate_level(generator_->params, config_.domain,
                                         cc.generator_wall_budget, rng_generator_));
      const Level& level = generated.back().level;
      Episode ep;
      ep.level_id = new_level_id(std::nullopt, "generator");
      ep.level = std::make_shared<const Level>(level);
      ep.result = play(pro, level, false);
      ep.score = score_episode(pro, ep.level_id, ep.result);
      const EpisodeResult anta = play(ant, level, false);
      const double anta_score = score_episode(ant, ep.level_id, anta);
      episode_count_ += 1;
      pro.buffer.update(ep.level_id, level, ep.score, episode_count_, ep.result.episode_return);
      ant.buffer.update(ep.level_id, level, anta_score, episode_count_, anta.episode_return);
      const double reward = anta.episode_return - ep.result.episode_return;
      rewards.push_back(reward);
      rec.generator_reward += reward / cc.episodes_per_iteration;
      episodes.push_back(std::move(ep));
    }
    train_generator(generated, rewards);
  } else {
    std::vector<Trajectory> pro_trajs;
    std::vector<Trajectory> ant_trajs;
    for (int b = 0; b < cc.episodes_per_iteration; ++b) {
      const std::size_t pi = pro.buffer.sample(episode_count_, rng_replay_);
      Episode ep;
      ep.level_id = pro.buffer.entries()[pi].level_id;
      ep.level = std::make_shared<const Level>(pro.buffer.entries()[pi].level);
      ep.result = play(pro, *ep.level, false);
      ep.score = score_episode(pro, ep.level_id, ep.result);

      const std::size_t ai = ant.buffer.sample(episode_count_, rng_replay_);
      const std::uint64_t ant_id = ant.buffer.entries()[ai].level_id;
      const Level ant_level = ant.buffer.entries()[ai].level;
      const EpisodeResult anta = play(ant, ant_level, false);
      const double anta_score = score_episode(ant, ant_id, anta);
      episode_count_ += 1;
      pro.buffer.update(ep.level_id, *ep.level, ep.score, episode_count_, ep.result.episode_return);
      ant.buffer.update(ant_id, ant_level, anta_score, episode_count_, anta.episode_return);
      pro_trajs.push_back(ep.result.traj);
      ant_trajs.push_back(anta.traj);
      episodes.push_back(std::move(ep));
    }
    train(pro, pro_trajs);
    train(ant, ant_trajs);
    rec.trained = true;
  }
  finish_record(rec, episodes, pro);
  return rec;
}

// ---------------------------------------------------------------- state

namespace {

json buffer_to_json(const LevelBuffer& buffer) {
  json entries = json::array();
  for (const BufferEntry& e : buffer.entries()) {
    entries.push_back({{"level_id", e.level_id},
                       {"level", json::parse(level_to_json(e.level))},
                       {"score", e.score},
                       {"timestamp", e.timestamp},
                       {"max_return", e.max_return},
                       {"last_return", e.last_return},
                       {"visit_count", e.visit_count},
                       {"insertion", e.insertion}});
  }
  return {{"next_insertion", buffer.next_insertion()}, {"entries", entries}};
}

void buffer_from_json(LevelBuffer& buffer, const json& j) {
  std::vector<BufferEntry> entries;
  for (const json& e : j.at("entries")) {
    BufferEntry b;
    b.level_id = e.at("level_id").get<std::uint64_t>();
    b.level = level_from_json(e.at("level").dump());
    b.score = e.at("score").get<double>();
    b.timestamp = e.at("timestamp").get<std::uint64_t>();
    b.max_return = e.at("max_return").get<double>();
    b.last_return = e.at("last_return").get<double>();
    b.visit_count = e.at("visit_count").get<std::uint64_t>();
    b.insertion = e.at("insertion").get<std::uint64_t>();
    entries.push_back(std::move(b));
  }
  buffer.restore(std::move(entries), j.at("next_insertion").get<std::uint64_t>());
}

json opt_to_json(const PolicyParams& params, const AdamState& opt, std::uint64_t updates) {
  json j{{"theta", vec_to_json(params.theta)}, {"adam_t", opt.t}, {"updates", updates}};
  j["adam_m"] = opt.m.size() ? vec_to_json(opt.m) : json::array();
  j["adam_v"] = opt.v.size() ? vec_to_json(opt.v) : json::array();
  return j;
}

void opt_from_json(PolicyParams& params, AdamState& opt, std::uint64_t& updates, const json& j) {
  Eigen::VectorXd theta = vec_from_json(j.at("theta"));
  if (theta.size() != params.theta.size()) {
    throw UedError(ErrorCode::kDimensionMismatch, "checkpoint parameter count differs from config");
  }
  params.theta = std::move(theta);
  opt.m = vec_from_json(j.at("adam_m"));
  opt.v = vec_from_json(j.at("adam_v"));
  opt.t = j.at("adam_t").get<std::uint64_t>();
  updates = j.at("updates").get<std::uint64_t>();
}

}  // namespace

std::string Trainer::state_json() const {
  json j;
  j["iteration"] = iteration_;
  j["episode_count"] = episode_count_;
  j["next_level_id"] = next_level_id_;
  j["seen_count"] = seen_count_;
  std::string seen(train_seen_.size(), '0');
  for (std::size_t i = 0; i < train_seen_.size(); ++i) seen[i] = train_seen_[i] ? '1' : '0';
  j["train_seen"] = seen;
  j["rng"] = {{"levels", rng_state(rng_levels_)},     {"replay", rng_state(rng_replay_)},
              {"env", rng_state(rng_env_)},           {"actions", rng_state(rng_actions_)},
              {"ppo", rng_state(rng_ppo_)},           {"edits", rng_state(rng_edits_)},
              {"generator", rng_state(rng_generator_)}, {"grounding", rng_state(rng_ground_)}};
  json students = json::array();
  for (const StudentState& s : students_) {
    json js = opt_to_json(s.params, s.opt, s.updates);
    js["buffer"] = buffer_to_json(s.buffer);
    students.push_back(std::move(js));
  }
  j["students"] = std::move(students);
  j["generator"] = generator_ ? opt_to_json(generator_->params, generator_->opt, generator_->updates)
                              : json(nullptr);
  json log = json::array();
  for (const LevelRecord& r : level_log_) {
    log.push_back({r.id, r.parent ? json(*r.parent) : json(nullptr), r.origin});
  }
  j["level_log"] = std::move(log);
  return j.dump();
}

void Trainer::restore_state_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    iteration_ = j.at("iteration").get<std::uint64_t>();
    episode_count_ = j.at("episode_count").get<std::uint64_t>();
    next_level_id_ = j.at("next_level_id").get<std::uint64_t>();
    seen_count_ = j.at("seen_count").get<std::size_t>();
    const std::string seen = j.at("train_seen").get<std::string>();
    if (seen.size() != train_seen_.size()) {
      throw UedError(ErrorCode::kConfigInvalid, "state train set size differs from config");
    }
    for (std::size_t i = 0; i < seen.size(); ++i) train_seen_[i] = seen[i] == '1';
    const json& r = j.at("rng");
    load_rng(rng_levels_, r.at("levels"));
    load_rng(rng_replay_, r.at("replay"));
    load_rng(rng_env_, r.at("env"));
    load_rng(rng_actions_, r.at("actions"));
    load_rng(rng_ppo_, r.at("ppo"));
    load_rng(rng_edits_, r.at("edits"));
    load_rng(rng_generator_, r.at("generator"));
    load_rng(rng_ground_, r.at("grounding"));
    const json& students = j.at("students");
    if (students.size() != students_.size()) {
      throw UedError(ErrorCode::kConfigInvalid, "state student count differs from config");
    }
    for (std::size_t i = 0; i < students_.size(); ++i) {
      opt_from_json(students_[i].params, students_[i].opt, students_[i].updates, students[i]);
      buffer_from_json(students_[i].buffer, students[i].at("buffer"));
    }
    if (generator_) opt_from_json(generator_->params, generator_->opt, generator_->updates, j.at("generator"));
    level_log_.clear();
    for (const json& e : j.at("level_log")) {
      LevelRecord rec{e.at(0).get<std::uint64_t>(), std::nullopt, e.at(2).get<std::string>()};
      if (!e.at(1).is_null()) rec.parent = e.at(1).get<std::uint64_t>();
      level_log_.push_back(std::move(rec));
    }
    prefilled_ = true;
  } catch (const json::exception& e) {
    throw UedError(ErrorCode::kConfigInvalid, std::string("corrupt trainer state: ") + e.what());
  }
}

}  // namespace ued
