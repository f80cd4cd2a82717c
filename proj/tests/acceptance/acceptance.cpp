// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Pass criterion numbers to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ued/curricula.hpp"
#include "ued/dcd_games.hpp"
#include "ued/generators.hpp"
#include "ued/metrics.hpp"
#include "ued/ppo.hpp"
#include "ued/replay_buffer.hpp"
#include "ued/rollout.hpp"
#include "ued/samplr.hpp"
#include "ued/stats.hpp"

using namespace ued;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  const int raw = pclose(pipe);
  status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1. Counterexample game through the CLI.
Outcome table41() {
  const auto t0 = std::chrono::steady_clock::now();
  int status = 0;
  const std::string out = capture(std::string(UED_CLI_PATH) + " analyze-game --table41 1,0.5,0.1,2", status);
  const double secs = seconds_since(t0);
  if (status != 0) return {false, fmt("exit status %d", status)};
  const json j = json::parse(out);
  const double mm = j.at("minimax_regret").at("value").get<double>();
  const double eq = j.at("equilibrium_worst_case_regret").get<double>();
  const bool ok = std::abs(mm - 0.5) <= 1e-9 && std::abs(eq - 0.65) <= 1e-9 && secs < 1.0;
  return {ok, fmt("minimax=%.6f equilibrium_regret=%.6f time=%.3fs", mm, eq, secs)};
}

// 2. Approximation bounds on random dual games.
Outcome theorem_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng = make_rng(2024, "acceptance-sweep");
  int certified = 0, violations = 0, unsolved = 0;
  double worst = -1e9;
  for (int i = 0; i < 100; ++i) {
    const DualGame g = random_dual_game(rng);
    try {
      const Equilibrium eq = find_equilibrium(g);
      ++certified;
      const Theorem1Report rep = verify_theorem1(g, eq, 1e-6, false);
      violations += rep.pass ? 0 : 1;
      for (const auto& c : rep.checks) {
        worst = std::max({worst, c.observed.student - c.bound, c.observed.teacher - c.bound});
      }
    } catch (const UedError& e) {
      if (e.code() != ErrorCode::kNoEquilibriumFound) throw;
      ++unsolved;
    }
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && unsolved == 0 && secs < 60.0,
          fmt("certified=%d unsolved=%d violations=%d max(observed-bound)=%.3g time=%.2fs", certified,
              unsolved, violations, worst, secs)};
}

// 3. GAE limits against direct recursions.
Outcome gae_identities() {
  Rng rng = make_rng(3, "acceptance-gae");
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    Trajectory tr;
    const int n = uniform_int(rng, 1, 64);
    for (int i = 0; i < n; ++i) {
      tr.obs.push_back(Eigen::VectorXd::Zero(1));
      tr.actions.push_back(0);
      tr.log_probs.push_back(0.0);
      tr.rewards.push_back((1.0 * sample_normal(rng)));
      tr.values.push_back((1.0 * sample_normal(rng)));
      tr.dones.push_back(bernoulli(rng, 0.1) ? 1 : 0);
    }
    tr.bootstrap_value = (1.0 * sample_normal(rng));
    const double gamma = 0.9 + 0.1 * uniform01(rng);
    std::vector<double> delta(n), mc(n);
    double g = tr.bootstrap_value;
    for (int i = n - 1; i >= 0; --i) {
      const double keep = tr.dones[i] ? 0.0 : 1.0;
      const double next_v = i + 1 < n ? tr.values[i + 1] : tr.bootstrap_value;
      delta[i] = tr.rewards[i] + gamma * keep * next_v - tr.values[i];
      g = tr.rewards[i] + gamma * keep * g;
      mc[i] = g - tr.values[i];
    }
    const Advantages a0 = compute_gae(tr, gamma, 0.0);
    const Advantages a1 = compute_gae(tr, gamma, 1.0);
    for (int i = 0; i < n; ++i) {
      worst = std::max({worst, std::abs(a0.advantages[i] - delta[i]), std::abs(a1.advantages[i] - mc[i])});
    }
  }
  return {worst < 1e-8, fmt("max abs error %.3g over 1000 trajectories", worst)};
}

// 4. Backprop against central differences.
Outcome gradient_fidelity() {
  Rng rng = make_rng(4, "acceptance-fd");
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    Architecture arch;
    arch.input_dim = uniform_int(rng, 2, 6);
    arch.hidden_dims.assign(static_cast<std::size_t>(uniform_int(rng, 1, 2)), 0);
    for (int& h : arch.hidden_dims) h = uniform_int(rng, 3, 8);
    arch.action_count = uniform_int(rng, 2, 4);
    // Detaching the value encoder is an intentional stop-gradient, so the
    // check runs on the fully coupled network.
    arch.detach_value_encoder = false;
    PolicyParams params = init_params(arch, rng);
    for (Eigen::Index i = 0; i < params.theta.size(); ++i) params.theta[i] += (0.3 * sample_normal(rng));

    const int n = uniform_int(rng, 1, 12);
    Batch b;
    b.obs = Eigen::MatrixXd::Random(n, arch.input_dim);
    const BatchForward f = forward_batch(params, b.obs);
    b.old_log_probs.resize(n);
    b.advantages.resize(n);
    b.returns.resize(n);
    b.old_values.resize(n);
    for (int i = 0; i < n; ++i) {
      const int a = uniform_int(rng, 0, arch.action_count - 1);
      b.actions.push_back(a);
      // Spread old log-probs so some ratios land outside the clip range.
      b.old_log_probs[i] = log_softmax(f.logits.row(i).transpose())[a] + (0.3 * sample_normal(rng));
      b.advantages[i] = (1.0 * sample_normal(rng));
      b.returns[i] = (1.0 * sample_normal(rng));
      b.old_values[i] = f.values[i] + (0.3 * sample_normal(rng));
    }
    PPOConfig cfg;
    cfg.entropy_coef = 0.01 * uniform01(rng);
    cfg.value_coef = 0.5;
    cfg.clip_value = bernoulli(rng, 0.5);

    const LossClosure closure = ppo_loss_closure(b, cfg);
    const GradResult g = grad(params, closure);
    Eigen::VectorXd fd(params.theta.size());
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < params.theta.size(); ++i) {
      PolicyParams p = params;
      p.theta[i] += h;
      const double up = evaluate_loss(p, closure);
      p.theta[i] -= 2 * h;
      const double down = evaluate_loss(p, closure);
      fd[i] = (up - down) / (2 * h);
    }
    const double denom = std::max({g.grad.norm(), fd.norm(), 1e-8});
    worst = std::max(worst, (g.grad - fd).norm() / denom);
  }
  return {worst < 1e-4, fmt("max relative error %.3g over 100 pairs", worst)};
}

// 5. Replay buffer invariants.
Outcome buffer_laws() {
  Rng rng = make_rng(5, "acceptance-buffer");
  long cases = 0, failures = 0;
  auto level = [](std::uint64_t i) {
    return make_empty_maze(9, 9, {1 + static_cast<int>(i % 7), 1 + static_cast<int>(i / 7 % 5)}, kEast, {7, 7});
  };
  for (int trial = 0; trial < 300; ++trial) {
    ReplayConfig c;
    c.capacity = static_cast<std::size_t>(uniform_int(rng, 1, 10));
    c.temperature = 0.05 + uniform01(rng);
    c.staleness_coef = uniform01(rng);
    c.prioritization = static_cast<Prioritization>(uniform_int(rng, 0, 2));
    LevelBuffer b(c);
    std::uint64_t episode = 0;
    for (int step = 0; step < 50; ++step) {
      ++episode;
      ++cases;
      const double s = bernoulli(rng, 0.2) ? std::round(uniform01(rng) * 4) / 4 : uniform01(rng);
      const auto id = static_cast<std::uint64_t>(uniform_int(rng, 0, 30));
      const bool present = b.find(id).has_value();
      const bool was_full = b.full();
      const double min_score = was_full && !present ? b.entries()[b.min_support_index(episode)].score : 0.0;
      const UpdateOutcome out = b.update(id, level(id), s, episode, 0.0);
      bool ok = b.size() <= c.capacity;
      if (was_full && !present) ok = ok && ((out == UpdateOutcome::kReplaced) == (s > min_score));
      const auto p = b.replay_distribution(episode);
      ok = ok && std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <= 1e-9;
      failures += ok ? 0 : 1;
    }
  }
  for (int trial = 0; trial < 5000; ++trial) {
    ++cases;
    ReplayConfig c;
    c.capacity = 8;
    c.temperature = 0.05 + uniform01(rng);
    LevelBuffer a(c), t(c);
    const double scale = 0.1 + 5 * uniform01(rng), shift = (3.0 * sample_normal(rng));
    for (std::uint64_t i = 0; i < 8; ++i) {
      const double s = uniform01(rng) - 0.5;
      a.update(i, level(i), s, 0, 0.0);
      t.update(i, level(i), std::exp(scale * s) + shift, 0, 0.0);
    }
    failures += a.score_distribution() == t.score_distribution() ? 0 : 1;
  }
  return {failures == 0 && cases >= 10000, fmt("%ld cases, %ld failures", cases, failures)};
}

TrainerConfig small_trainer(CurriculumKind kind) {
  TrainerConfig c;
  c.curriculum.kind = kind;
  c.curriculum.episodes_per_iteration = 2;
  c.hidden_dims = {16};
  c.frame_stack = 2;
  c.replay.capacity = 16;
  c.replay.replay_rate = 0.5;
  c.ppo.epochs = 1;
  c.env.maze_max_steps = 60;
  c.curriculum.generator_hidden = {8};
  c.curriculum.generator_wall_budget = 10;
  if (kind == CurriculumKind::kSAMPLR) c.domain.kind = EnvKind::kIcyMaze;
  return c;
}

// 6. Students only move on replay iterations.
Outcome stop_gradient() {
  std::string detail;
  bool pass = true;
  for (auto kind : {CurriculumKind::kRobustPLR, CurriculumKind::kREPAIRED, CurriculumKind::kACCEL,
                    CurriculumKind::kSAMPLR}) {
    Trainer t(small_trainer(kind), 6);
    int counts[2] = {0, 0}, bad = 0;
    for (int i = 0; i < 500; ++i) {
      std::vector<std::uint64_t> before;
      for (std::size_t s = 0; s < t.student_count(); ++s) before.push_back(params_hash(t.student(s).params));
      const IterationRecord r = t.run_iteration();
      counts[r.d] += 1;
      for (std::size_t s = 0; s < t.student_count(); ++s) {
        const bool changed = before[s] != params_hash(t.student(s).params);
        if (changed != (r.d == 1)) ++bad;
      }
    }
    const bool ok = bad == 0 && counts[0] > 0 && counts[1] > 0;
    pass = pass && ok;
    detail += fmt("%s(d0=%d d1=%d bad=%d) ", std::string(curriculum_kind_name(kind)).c_str(), counts[0],
                  counts[1], bad);
  }
  return {pass, detail};
}

// Share of fruit-eating episodes that pick the banana, sampling from the
// policy on ground-truth levels.
double banana_choice_rate(const PolicyParams& params, const TrainerConfig& c, int episodes) {
  Rng rng = make_rng(99, "banana-eval");
  PolicyActor actor(params, c.frame_stack, false);
  Env env(c.env);
  int bananas = 0, eaten = 0;
  for (int i = 0; i < episodes; ++i) {
    auto lv = std::make_shared<const Level>(sample_dr_level(c.domain, rng));
    const EpisodeResult ep = run_episode(actor, env, lv, static_cast<std::uint64_t>(i), rng);
    if (!ep.ate_fruit) continue;
    ++eaten;
    bananas += *ep.ate_fruit == Fruit::kBanana;
  }
  return eaten ? static_cast<double>(bananas) / eaten : 0.0;
}

TrainerConfig fruit_trainer(CurriculumKind kind) {
  TrainerConfig c;
  c.domain.kind = EnvKind::kFruitChoice;
  c.domain.apple_prob = 0.7;
  c.domain.fruit_min_rooms = 0;
  c.domain.fruit_max_rooms = 1;
  c.curriculum.kind = kind;
  c.curriculum.prior.apple_prob = 0.7;
  c.curriculum.episodes_per_iteration = 32;
  c.replay.replay_rate = 0.5;
  c.replay.capacity = 100;
  c.ppo.learning_rate = 3e-4;
  c.ppo.epochs = 3;
  return c;
}

class AlwaysBanana : public Actor {
 public:
  ActionId act(const Env& env, const Observation&, Rng&) override {
    const EnvState& s = env.state();
    if (s.room == s.level->room_count) return fruit_action::kEatBanana;
    return s.kicks_remaining[static_cast<std::size_t>(s.room)] > 0 ? fruit_action::kKick : fruit_action::kForward;
  }
};

// 7. Fruit choice with and without grounding.
Outcome fruit_choice() {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr int kIterations = 3000, kWindow = 300;
  const EnvConfig env;
  const double oracle = std::max(env.reward_apple * 0.7, env.reward_banana * 0.3);

  // The oracle value, also measured with a scripted always-banana player.
  AlwaysBanana banana_actor;
  Env e(env);
  Rng rng = make_rng(7, "fruit-oracle");
  DomainConfig dom = fruit_trainer(CurriculumKind::kSAMPLR).domain;
  double total = 0.0;
  const int oracle_episodes = 20000;
  for (int i = 0; i < oracle_episodes; ++i) {
    auto lv = std::make_shared<const Level>(sample_dr_level(dom, rng));
    total += run_episode(banana_actor, e, lv, static_cast<std::uint64_t>(i), rng).episode_return;
  }
  const double measured = total / oracle_episodes;
  bool pass = std::abs(oracle - 3.0) < 1e-12 && std::abs(measured - 3.0) < 0.1;
  std::string detail = fmt("oracle=%.1f measured=%.3f; ", oracle, measured);

  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    double variance[2] = {0.0, 0.0};
    double banana = 0.0;
    std::uint64_t steps_used = 0;
    const CurriculumKind kinds[2] = {CurriculumKind::kSAMPLR, CurriculumKind::kRobustPLR};
    for (int k = 0; k < 2; ++k) {
      const TrainerConfig c = fruit_trainer(kinds[k]);
      Trainer t(c, seed);
      std::vector<double> rates;
      int apples = 0, fruit = 0;
      std::uint64_t steps = 0;
      for (int i = 1; i <= kIterations; ++i) {
        const IterationRecord r = t.run_iteration();
        apples += r.trained_apple;
        fruit += r.trained_fruit_episodes;
        steps += r.env_steps;
        if (i % kWindow == 0 && fruit > 0) {
          rates.push_back(static_cast<double>(apples) / fruit);
          apples = fruit = 0;
        }
      }
      variance[k] = rates.size() > 1 ? stats::variance(rates) : 0.0;
      steps_used = std::max(steps_used, steps);
      if (k == 0) banana = banana_choice_rate(t.student().params, c, 1000);
    }
    const bool ok = banana >= 0.9 && variance[1] > variance[0] && steps_used <= 2'000'000;
    pass = pass && ok;
    detail += fmt("seed%llu: banana=%.3f var_apple robust=%.2e samplr=%.2e steps=%llu; ",
                  static_cast<unsigned long long>(seed), banana, variance[1], variance[0],
                  static_cast<unsigned long long>(steps_used));
  }
  const double secs = seconds_since(t0);
  detail += fmt("time=%.0fs", secs);
  return {pass && secs < 1800.0, detail};
}

// 8. Posterior predictive of resampled ice; reward streams of SAMPLR vs
// naive grounding.
Outcome samplr_consistency() {
  Rng rng = make_rng(8, "acceptance-posterior");
  Level lv = make_empty_maze(9, 9, {1, 1}, kEast, {7, 7});
  lv.kind = EnvKind::kIcyMaze;
  lv.ice.assign(lv.cells.size(), 0);
  lv.ice_rate_q = 0.3;
  for (std::size_t i = 0; i < lv.cells.size(); ++i) {
    if (lv.cells[i] == Cell::kEmpty) lv.ice[i] = bernoulli(rng, 0.3) ? 1 : 0;
  }
  lv.ice[lv.index(lv.goal)] = 0;
  Env env;
  env.reset(lv, 0);
  for (ActionId a : {maze_action::kForward, maze_action::kForward, maze_action::kRight, maze_action::kForward}) {
    if (!env.state().done) env.step(a);
  }
  BeliefPosterior belief = make_belief(1.0, 15.0, lv.cells.size());
  observe_visits(belief, env.state());
  int open_unvisited = 0;
  for (std::size_t c = 0; c < lv.cells.size(); ++c) {
    open_unvisited += lv.cells[c] != Cell::kWall && !env.state().visited[c];
  }
  std::vector<double> observed(static_cast<std::size_t>(open_unvisited) + 1, 0.0), probs;
  for (int i = 0; i < 10000; ++i) {
    EnvState s = env.state();
    resample_unvisited_ice(s, belief, rng);
    int k = 0;
    for (std::size_t c = 0; c < lv.cells.size(); ++c) k += lv.cells[c] != Cell::kWall && !s.visited[c] && s.ice[c];
    observed[static_cast<std::size_t>(k)] += 1;
  }
  for (int k = 0; k <= open_unvisited; ++k) {
    probs.push_back(stats::beta_binomial_pmf(k, open_unvisited, belief.post_alpha(), belief.post_beta()));
  }
  const stats::TestResult chi = stats::chi_square_gof(observed, probs);

  // Reward streams on levels a curriculum biased toward apples.
  EnvConfig env_cfg;
  RolloutOptions opts;
  Architecture arch;
  arch.input_dim = static_cast<int>(observation_encoding_size(EnvKind::kFruitChoice, env_cfg)) * opts.frame_stack;
  arch.hidden_dims = {16};
  arch.action_count = fruit_action::kCount;
  Rng init = make_rng(8, "acceptance-ks-policy");
  const PolicyParams params = init_params(arch, init);
  AleatoricPrior prior;
  DomainConfig dom;
  dom.kind = EnvKind::kFruitChoice;
  dom.fruit_max_rooms = 1;
  Rng level_rng = make_rng(8, "acceptance-ks-levels");
  Rng rng_a = make_rng(8, "acceptance-ks-run"), rng_b = make_rng(8, "acceptance-ks-run");
  Env primary(env_cfg), fictitious(env_cfg), plain(env_cfg);
  std::vector<double> samplr_rewards, naive_rewards;
  for (int i = 0; i < 3000; ++i) {
    Level biased = sample_dr_level(dom, level_rng);
    biased.correct_fruit = Fruit::kApple;
    const auto shared = std::make_shared<const Level>(biased);
    const auto seed = static_cast<std::uint64_t>(i);
    samplr_rewards.push_back(
        collect_fictitious_episode(params, primary, fictitious, shared, seed, prior, rng_a, opts).fictitious_return);
    const auto grounded = std::make_shared<const Level>(naive_ground(biased, prior, rng_b));
    naive_rewards.push_back(collect_episode(params, plain, grounded, seed, rng_b, opts).episode_return);
  }
  const stats::TestResult ks = stats::ks_two_sample(samplr_rewards, naive_rewards);
  return {chi.p_value > 0.01 && ks.p_value > 0.01,
          fmt("chi2=%.2f dof=%.0f p=%.3f (m=%d unvisited, posterior Beta(%.0f,%.0f)); KS D=%.4f p=%.3f "
              "(mean %.3f vs %.3f)",
              chi.statistic, chi.dof, chi.p_value, open_unvisited, belief.post_alpha(), belief.post_beta(),
              ks.statistic, ks.p_value, stats::mean(samplr_rewards), stats::mean(naive_rewards))};
}

// Rooms in use for a multi-room level (the difficulty bin).
int rooms_in_use(const Level& lv, int max_rooms) {
  const int span = (lv.width - 1) / max_rooms;
  int n = 0;
  for (int r = 0; r < max_rooms; ++r) {
    for (int y = 1; y < lv.height - 1; ++y) {
      if (lv.cell({r * span + 1, y}) != Cell::kWall) {
        ++n;
        break;
      }
    }
  }
  return n;
}

// 9. PLR replay drifts toward harder levels.
Outcome emergent_curriculum() {
  bool pass = true;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto t0 = std::chrono::steady_clock::now();
    TrainerConfig c;
    c.curriculum.kind = CurriculumKind::kPLR;
    c.curriculum.episodes_per_iteration = 4;
    c.curriculum.train_set_size = 200;
    c.domain.layout = MazeLayout::kMultiRoom;
    c.domain.width = 13;
    c.domain.height = 7;
    c.domain.min_rooms = 1;
    c.domain.max_rooms = 4;
    c.replay.capacity = 200;
    c.replay.score_kind = ScoreKind::kPVL;
    c.replay.replay_rate = 0.5;
    Trainer t(c, seed);
    std::vector<double> index, bin;
    for (int i = 0; i < 2000; ++i) {
      const IterationRecord r = t.run_iteration();
      // Only replayed levels reflect the curator's choice; new levels come
      // uniformly from the train set.
      if (r.d == 0) continue;
      double m = 0.0;
      for (auto id : r.level_ids) m += rooms_in_use(t.train_set()[id], c.domain.max_rooms);
      index.push_back(static_cast<double>(t.student_updates()));
      bin.push_back(m / static_cast<double>(r.level_ids.size()));
    }
    const stats::TestResult s = stats::spearman(index, bin);
    const double secs = seconds_since(t0);
    const bool ok = s.statistic > 0.0 && s.p_value < 0.05 && secs < 1200.0;
    pass = pass && ok;
    const std::size_t q = bin.size() / 4;
    const double first = std::accumulate(bin.begin(), bin.begin() + static_cast<std::ptrdiff_t>(q), 0.0) / q;
    const double last = std::accumulate(bin.end() - static_cast<std::ptrdiff_t>(q), bin.end(), 0.0) / q;
    detail += fmt("seed%llu: rho=%.3f p=%.2g bins %.2f->%.2f %.0fs; ", static_cast<unsigned long long>(seed),
                  s.statistic, s.p_value, first, last, secs);
  }
  return {pass, detail};
}

struct BufferStats {
  double walls = 0.0;
  double solved_path = 0.0;
  int solved = 0;
};

BufferStats buffer_stats(const LevelBuffer& b) {
  BufferStats s;
  for (const BufferEntry& e : b.entries()) {
    s.walls += e.level.interior_wall_count();
    if (e.max_return > 0.0) {
      s.solved_path += shortest_path_length(e.level);
      ++s.solved;
    }
  }
  if (b.size()) s.walls /= static_cast<double>(b.size());
  if (s.solved) s.solved_path /= s.solved;
  return s;
}

// 10. ACCEL grows complexity from empty rooms.
Outcome accel_growth() {
  double walls0 = 0, walls1 = 0, path0 = 0, path1 = 0;
  std::string detail;
  bool in_time = true;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto t0 = std::chrono::steady_clock::now();
    TrainerConfig c;
    c.curriculum.kind = CurriculumKind::kACCEL;
    c.curriculum.accel_generator = MazeLayout::kEmptyRoom;
    c.curriculum.episodes_per_iteration = 8;
    c.curriculum.edits_per_level = 5;
    c.replay.capacity = 100;
    c.replay.score_kind = ScoreKind::kMaxMC;
    c.replay.replay_rate = 0.9;
    Trainer t(c, seed);
    const BufferStats a = buffer_stats(t.student().buffer);
    for (int i = 0; i < 2000; ++i) t.run_iteration();
    const BufferStats b = buffer_stats(t.student().buffer);
    const double secs = seconds_since(t0);
    in_time = in_time && secs < 1800.0;
    walls0 += a.walls / 3;
    walls1 += b.walls / 3;
    path0 += a.solved_path / 3;
    path1 += b.solved_path / 3;
    detail += fmt("seed%llu: walls %.2f->%.2f path %.2f->%.2f (solved %d->%d) %.0fs; ",
                  static_cast<unsigned long long>(seed), a.walls, b.walls, a.solved_path, b.solved_path,
                  a.solved, b.solved, secs);
  }
  detail += fmt("mean walls %.2f->%.2f path %.2f->%.2f", walls0, walls1, path0, path1);
  return {walls1 > walls0 && path1 > path0 && in_time, detail};
}

// Textbook LZW, emitting the code sequence.
std::vector<int> reference_lzw_trace(const std::vector<int>& seq) {
  std::map<std::vector<int>, int> dict;
  std::set<int> alphabet(seq.begin(), seq.end());
  for (int s : alphabet) dict.emplace(std::vector<int>{s}, static_cast<int>(dict.size()));
  std::vector<int> codes, w;
  for (int s : seq) {
    std::vector<int> ws = w;
    ws.push_back(s);
    if (dict.count(ws)) {
      w = std::move(ws);
    } else {
      codes.push_back(dict.at(w));
      dict.emplace(std::move(ws), static_cast<int>(dict.size()));
      w = {s};
    }
  }
  if (!w.empty()) codes.push_back(dict.at(w));
  return codes;
}

// 11. LZW complexity against the reference trace length.
Outcome lzw_reference() {
  Rng rng = make_rng(11, "acceptance-lzw");
  int mismatches = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<int> seq(static_cast<std::size_t>(uniform_int(rng, 1, 600)));
    const int alphabet = uniform_int(rng, 1, 4);
    for (int& s : seq) s = uniform_int(rng, 0, alphabet - 1);
    mismatches += lzw_complexity(seq) == reference_lzw_trace(seq).size() ? 0 : 1;
  }
  return {mismatches == 0, fmt("%d/100 mismatches", mismatches)};
}

// 12. Repeated training runs write identical metrics.
Outcome determinism() {
  std::string detail;
  bool pass = true;
  for (const char* name : {"robust_plr_maze.json", "accel_maze.json", "samplr_icy.json"}) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = fs::temp_directory_path() / ("ued_accept_det_" + std::to_string(rep));
      fs::remove_all(dir);
      int status = 0;
      capture(std::string(UED_CLI_PATH) + " train --config " + UED_SOURCE_DIR + "/configs/" + name +
                  " --out " + dir.string() + " 2>&1",
              status);
      const std::string metrics = slurp(dir / "metrics.csv");
      fs::remove_all(dir);
      if (status != 0 || metrics.empty()) {
        pass = false;
        detail += fmt("%s: run failed (status %d); ", name, status);
        break;
      }
      if (rep == 0) {
        first = metrics;
      } else {
        const bool same = first == metrics;
        pass = pass && same;
        detail += fmt("%s: %s (%zu bytes); ", name, same ? "identical" : "DIFFERENT", metrics.size());
      }
    }
  }
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"counterexample game", table41},
      {"approximation bounds sweep", theorem_sweep},
      {"gae identities", gae_identities},
      {"gradient fidelity", gradient_fidelity},
      {"buffer laws", buffer_laws},
      {"stop-gradient contract", stop_gradient},
      {"fruit-choice grounding", fruit_choice},
      {"posterior consistency", samplr_consistency},
      {"emergent curriculum", emergent_curriculum},
      {"accel complexity growth", accel_growth},
      {"lzw reference", lzw_reference},
      {"train determinism", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("C%d %s %s: %s\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
