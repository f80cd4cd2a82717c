#include "ued/dcd_games.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "ued/lp.hpp"

namespace ued {

using nlohmann::json;

void BaseGame::validate() const {
  if (payoff.rows() < 1 || payoff.cols() < 1) {
    throw UedError(ErrorCode::kDimensionMismatch, "payoff matrix needs at least one row and column");
  }
  if (!payoff.allFinite()) throw UedError(ErrorCode::kConfigInvalid, "payoffs must be finite");
}

Eigen::MatrixXd regret_matrix(const BaseGame& game) {
  Eigen::MatrixXd r(game.payoff.rows(), game.payoff.cols());
  for (Eigen::Index t = 0; t < game.payoff.cols(); ++t) {
    const double best = game.payoff.col(t).maxCoeff();
    r.col(t) = (best - game.payoff.col(t).array()).matrix();
  }
  return r;
}

Eigen::MatrixXd DualGame::teacher_utility(int which) const {
  const TeacherSpec& spec = which == 1 ? teacher1 : teacher2;
  switch (spec.kind) {
    case TeacherKind::kRegret: return regret_matrix(base);
    case TeacherKind::kUniform: return Eigen::MatrixXd::Zero(base.payoff.rows(), base.payoff.cols());
    case TeacherKind::kCustom: return spec.utility;
  }
  return regret_matrix(base);
}

double DualGame::max_utility_gap() const {
  return (teacher_utility(1) - teacher_utility(2)).cwiseAbs().maxCoeff();
}

void validate_mixture(const Eigen::VectorXd& mix, int size, const char* what) {
  if (mix.size() != size) {
    throw UedError(ErrorCode::kDimensionMismatch, std::string(what) + " mixture has the wrong size");
  }
  if ((mix.array() < 0.0).any() || std::abs(mix.sum() - 1.0) > 1e-12) {
    throw UedError(ErrorCode::kDimensionMismatch, std::string(what) + " is not a distribution");
  }
}

void DualGame::validate() const {
  base.validate();
  if (!(p >= 0.0 && p <= 1.0)) throw UedError(ErrorCode::kConfigInvalid, "p must be in [0,1]");
  for (const TeacherSpec* spec : {&teacher1, &teacher2}) {
    if (spec->kind == TeacherKind::kCustom &&
        (spec->utility.rows() != base.payoff.rows() || spec->utility.cols() != base.payoff.cols())) {
      throw UedError(ErrorCode::kDimensionMismatch, "teacher utility shape differs from payoffs");
    }
    if (spec->kind == TeacherKind::kUniform && spec->mixture) {
      validate_mixture(*spec->mixture, base.thetas(), "uniform teacher");
    }
  }
}

double regret_of(const BaseGame& game, const Eigen::VectorXd& student, int theta) {
  const auto col = game.payoff.col(theta);
  return col.maxCoeff() - student.dot(col);
}

double worst_case_regret(const BaseGame& game, const Eigen::VectorXd& student) {
  double worst = 0.0;
  for (int t = 0; t < game.thetas(); ++t) worst = std::max(worst, regret_of(game, student, t));
  return worst;
}

MinimaxRegret minimax_regret(const BaseGame& game) {
  game.validate();
  const Eigen::MatrixXd r = regret_matrix(game);
  const int n = game.students();
  // Variables x_0..x_{n-1}, t; maximize -t.
  lp::Problem prob;
  prob.num_vars = n + 1;
  prob.objective.assign(static_cast<std::size_t>(n + 1), 0.0);
  prob.objective[n] = -1.0;
  prob.free_vars.assign(static_cast<std::size_t>(n + 1), false);
  prob.free_vars[n] = true;
  lp::Constraint sum;
  sum.a.assign(static_cast<std::size_t>(n + 1), 1.0);
  sum.a[n] = 0.0;
  sum.sense = lp::Sense::kEq;
  sum.b = 1.0;
  prob.constraints.push_back(sum);
  for (int t = 0; t < game.thetas(); ++t) {
    lp::Constraint c;
    c.a.resize(static_cast<std::size_t>(n + 1));
    for (int i = 0; i < n; ++i) c.a[i] = r(i, t);
    c.a[n] = -1.0;
    c.sense = lp::Sense::kLe;
    prob.constraints.push_back(c);
  }
  const lp::Solution sol = lp::solve(prob);
  if (sol.status != lp::Status::kOptimal) {
    throw UedError(ErrorCode::kNoEquilibriumFound, "minimax-regret LP failed");
  }
  MinimaxRegret out;
  out.student.resize(n);
  for (int i = 0; i < n; ++i) out.student[i] = std::max(0.0, sol.x[i]);
  out.student /= out.student.sum();
  out.value = worst_case_regret(game, out.student);
  return out;
}

namespace {

Eigen::VectorXd uniform_mixture(int n) { return Eigen::VectorXd::Constant(n, 1.0 / n); }

Eigen::VectorXd fixed_mixture(const TeacherSpec& spec, int n) {
  return spec.mixture ? *spec.mixture : uniform_mixture(n);
}

std::pair<int, double> first_argmax(const Eigen::VectorXd& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return {best, v[best]};
}

}  // namespace

Eigen::VectorXd pure_payoffs(const DualGame& game, const MixedProfile& profile, Player player) {
  const Eigen::MatrixXd& v = game.base.payoff;
  switch (player) {
    case Player::kStudent:
      return game.p * (v * profile.teacher1) + (1.0 - game.p) * (v * profile.teacher2);
    case Player::kTeacher1: return game.teacher_utility(1).transpose() * profile.student;
    case Player::kTeacher2: return game.teacher_utility(2).transpose() * profile.student;
  }
  return {};
}

BestResponse best_response(const DualGame& game, const MixedProfile& profile, Player player) {
  const TeacherSpec* spec = player == Player::kTeacher1   ? &game.teacher1
                            : player == Player::kTeacher2 ? &game.teacher2
                                                          : nullptr;
  if (spec && spec->kind == TeacherKind::kUniform) return {0, 0.0};
  const auto [idx, val] = first_argmax(pure_payoffs(game, profile, player));
  return {idx, val};
}

double Exploitability::max() const { return std::max({student, teacher1, teacher2}); }

Exploitability exploitability(const DualGame& game, const MixedProfile& profile) {
  Exploitability e;
  const Eigen::VectorXd s = pure_payoffs(game, profile, Player::kStudent);
  e.student = s.maxCoeff() - profile.student.dot(s);
  const Eigen::VectorXd t1 = pure_payoffs(game, profile, Player::kTeacher1);
  e.teacher1 = t1.maxCoeff() - profile.teacher1.dot(t1);
  const Eigen::VectorXd t2 = pure_payoffs(game, profile, Player::kTeacher2);
  e.teacher2 = t2.maxCoeff() - profile.teacher2.dot(t2);
  return e;
}

namespace {

std::vector<int> members(unsigned mask, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (mask & (1u << i)) out.push_back(i);
  }
  return out;
}

Eigen::VectorXd clean(const Eigen::VectorXd& v) {
  Eigen::VectorXd out = v.cwiseMax(0.0);
  return out / out.sum();
}

// Student mixture on support S making every theta in T_i a best response of
// each free teacher.
std::optional<Eigen::VectorXd> solve_student(const DualGame& game, const Eigen::MatrixXd* u[2],
                                             unsigned s_mask, const unsigned t_mask[2]) {
  const int np = game.base.students();
  const int nt = game.base.thetas();
  const std::vector<int> s = members(s_mask, np);
  const int k = static_cast<int>(s.size());
  lp::Problem prob;
  prob.num_vars = k + 2;
  prob.objective.assign(static_cast<std::size_t>(k + 2), 0.0);
  prob.free_vars.assign(static_cast<std::size_t>(k + 2), false);
  prob.free_vars[k] = prob.free_vars[k + 1] = true;
  lp::Constraint sum;
  sum.a.assign(static_cast<std::size_t>(k + 2), 0.0);
  for (int i = 0; i < k; ++i) sum.a[i] = 1.0;
  sum.sense = lp::Sense::kEq;
  sum.b = 1.0;
  prob.constraints.push_back(sum);
  for (int w = 0; w < 2; ++w) {
    if (!u[w]) continue;
    for (int t = 0; t < nt; ++t) {
      lp::Constraint c;
      c.a.assign(static_cast<std::size_t>(k + 2), 0.0);
      for (int i = 0; i < k; ++i) c.a[i] = (*u[w])(s[i], t);
      c.a[k + w] = -1.0;
      c.sense = (t_mask[w] & (1u << t)) ? lp::Sense::kEq : lp::Sense::kLe;
      prob.constraints.push_back(c);
    }
  }
  const lp::Solution sol = lp::solve(prob);
  if (sol.status != lp::Status::kOptimal) return std::nullopt;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(np);
  for (int i = 0; i < k; ++i) x[s[i]] = sol.x[i];
  return clean(x);
}

// Teacher mixtures on supports T_i making every student strategy in S a best
// response to the joint teacher.
std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> solve_teachers(
    const DualGame& game, const std::optional<Eigen::VectorXd> fixed[2], unsigned s_mask,
    const unsigned t_mask[2]) {
  const int np = game.base.students();
  const int nt = game.base.thetas();
  const Eigen::MatrixXd& v = game.base.payoff;
  const double weight[2] = {game.p, 1.0 - game.p};
  std::vector<int> supp[2];
  int offset[2] = {0, 0};
  int vars = 0;
  for (int w = 0; w < 2; ++w) {
    if (fixed[w]) continue;
    supp[w] = members(t_mask[w], nt);
    offset[w] = vars;
    vars += static_cast<int>(supp[w].size());
  }
  const int wv = vars;
  lp::Problem prob;
  prob.num_vars = vars + 1;
  prob.objective.assign(static_cast<std::size_t>(vars + 1), 0.0);
  prob.free_vars.assign(static_cast<std::size_t>(vars + 1), false);
  prob.free_vars[wv] = true;
  for (int w = 0; w < 2; ++w) {
    if (fixed[w]) continue;
    lp::Constraint sum;
    sum.a.assign(static_cast<std::size_t>(vars + 1), 0.0);
    for (std::size_t j = 0; j < supp[w].size(); ++j) sum.a[offset[w] + static_cast<int>(j)] = 1.0;
    sum.sense = lp::Sense::kEq;
    sum.b = 1.0;
    prob.constraints.push_back(sum);
  }
  for (int i = 0; i < np; ++i) {
    lp::Constraint c;
    c.a.assign(static_cast<std::size_t>(vars + 1), 0.0);
    double constant = 0.0;
    for (int w = 0; w < 2; ++w) {
      if (fixed[w]) {
        constant += weight[w] * v.row(i).dot(*fixed[w]);
      } else {
        for (std::size_t j = 0; j < supp[w].size(); ++j) {
          c.a[offset[w] + static_cast<int>(j)] = weight[w] * v(i, supp[w][j]);
        }
      }
    }
    c.a[wv] = -1.0;
    c.b = -constant;
    c.sense = (s_mask & (1u << i)) ? lp::Sense::kEq : lp::Sense::kLe;
    prob.constraints.push_back(c);
  }
  const lp::Solution sol = lp::solve(prob);
  if (sol.status != lp::Status::kOptimal) return std::nullopt;
  Eigen::VectorXd y[2];
  for (int w = 0; w < 2; ++w) {
    if (fixed[w]) {
      y[w] = *fixed[w];
      continue;
    }
    y[w] = Eigen::VectorXd::Zero(nt);
    for (std::size_t j = 0; j < supp[w].size(); ++j) y[w][supp[w][j]] = sol.x[offset[w] + static_cast<int>(j)];
    y[w] = clean(y[w]);
  }
  return std::make_pair(y[0], y[1]);
}

void simplex_grid(int n, int resolution, std::vector<Eigen::VectorXd>& out) {
  std::vector<int> counts(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == n - 1) {
      counts[i] = left;
      Eigen::VectorXd v(n);
      for (int j = 0; j < n; ++j) v[j] = static_cast<double>(counts[j]) / resolution;
      out.push_back(v);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[i] = c;
      self(self, i + 1, left - c);
    }
  };
  rec(rec, 0, resolution);
}

}  // namespace

Equilibrium find_equilibrium(const DualGame& game, int grid_resolution, double tol) {
  game.validate();
  const int np = game.base.students();
  const int nt = game.base.thetas();
  if (np > 16 || nt > 16) {
    throw UedError(ErrorCode::kDimensionMismatch, "equilibrium search is limited to small games");
  }
  std::optional<Eigen::VectorXd> fixed[2];
  Eigen::MatrixXd util[2] = {game.teacher_utility(1), game.teacher_utility(2)};
  const Eigen::MatrixXd* free_util[2] = {nullptr, nullptr};
  const TeacherSpec* specs[2] = {&game.teacher1, &game.teacher2};
  for (int w = 0; w < 2; ++w) {
    if (specs[w]->kind == TeacherKind::kUniform) {
      fixed[w] = fixed_mixture(*specs[w], nt);
    } else {
      free_util[w] = &util[w];
    }
  }
  const unsigned full_s = (1u << np) - 1;
  const unsigned full_t = (1u << nt) - 1;
  std::vector<std::tuple<int, unsigned, unsigned, unsigned>> combos;
  for (unsigned s = 1; s <= full_s; ++s) {
    for (unsigned t1 = fixed[0] ? 0 : 1; t1 <= (fixed[0] ? 0 : full_t); ++t1) {
      for (unsigned t2 = fixed[1] ? 0 : 1; t2 <= (fixed[1] ? 0 : full_t); ++t2) {
        combos.emplace_back(std::popcount(s) + std::popcount(t1) + std::popcount(t2), s, t1, t2);
      }
    }
  }
  std::sort(combos.begin(), combos.end());
  for (const auto& [size, s, t1, t2] : combos) {
    const unsigned tm[2] = {t1, t2};
    const auto x = solve_student(game, free_util, s, tm);
    if (!x) continue;
    const auto y = solve_teachers(game, fixed, s, tm);
    if (!y) continue;
    Equilibrium eq{{*x, y->first, y->second}, {}};
    eq.certificate = exploitability(game, eq.profile);
    if (eq.certificate.max() <= tol) return eq;
  }

  // Grid fallback, reporting the least exploitable candidate.
  std::vector<Eigen::VectorXd> xs, ys;
  int res = std::max(1, grid_resolution);
  simplex_grid(np, res, xs);
  simplex_grid(nt, res, ys);
  std::vector<Eigen::VectorXd> y1s = fixed[0] ? std::vector<Eigen::VectorXd>{*fixed[0]} : ys;
  std::vector<Eigen::VectorXd> y2s = fixed[1] ? std::vector<Eigen::VectorXd>{*fixed[1]} : ys;
  Equilibrium best{{xs.front(), y1s.front(), y2s.front()}, {}};
  best.certificate = exploitability(game, best.profile);
  const double budget = 2e6;
  if (static_cast<double>(xs.size()) * y1s.size() * y2s.size() <= budget) {
    for (const auto& x : xs) {
      for (const auto& a : y1s) {
        for (const auto& b : y2s) {
          MixedProfile prof{x, a, b};
          const Exploitability e = exploitability(game, prof);
          if (e.max() < best.certificate.max()) best = {prof, e};
        }
      }
    }
  }
  std::ostringstream os;
  os << "no profile within tolerance " << tol << "; best grid candidate has exploitability "
     << best.certificate.max();
  throw UedError(ErrorCode::kNoEquilibriumFound, os.str());
}

BaseExploitability base_exploitability(const BaseGame& game, const Eigen::MatrixXd& teacher_utility,
                                       const Eigen::VectorXd& student,
                                       const Eigen::VectorXd& teacher) {
  BaseExploitability e;
  const Eigen::VectorXd s = game.payoff * teacher;
  e.student = s.maxCoeff() - student.dot(s);
  const Eigen::VectorXd t = teacher_utility.transpose() * student;
  e.teacher = t.maxCoeff() - teacher.dot(t);
  return e;
}

Theorem1Report verify_theorem1(const DualGame& game, const Equilibrium& eq, double tol,
                               bool throw_on_violation) {
  Theorem1Report rep;
  rep.B = game.max_utility_gap();
  rep.p = game.p;
  const double p = game.p;
  rep.joint_teacher = p * eq.profile.teacher1 + (1.0 - p) * eq.profile.teacher2;
  const Eigen::MatrixXd u1 = game.teacher_utility(1);
  const Eigen::MatrixXd u2 = game.teacher_utility(2);
  const Eigen::MatrixXd uj = p * u1 + (1.0 - p) * u2;
  const std::tuple<const char*, const Eigen::MatrixXd*, double> cases[3] = {
      {"joint", &uj, 2.0 * rep.B * p * (1.0 - p)},
      {"first", &u1, 2.0 * rep.B * (1.0 - p)},
      {"second", &u2, 2.0 * rep.B * p},
  };
  for (const auto& [name, u, bound] : cases) {
    BoundCheck c;
    c.name = name;
    c.bound = bound;
    c.observed = base_exploitability(game.base, *u, eq.profile.student, rep.joint_teacher);
    c.ok = c.observed.student <= bound + tol && c.observed.teacher <= bound + tol;
    rep.pass = rep.pass && c.ok;
    if (!c.ok && throw_on_violation) {
      const bool student_side = c.observed.student > bound + tol;
      std::ostringstream os;
      os << name << " bound " << bound << " violated by the "
         << (student_side ? "student" : "teacher") << " (margin "
         << (student_side ? c.observed.student : c.observed.teacher) - bound << ")";
      throw UedError(ErrorCode::kBoundViolated, os.str());
    }
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

BaseGame build_table41_game(double B, double p, double eps, int n) {
  if (!(B > 0.0) || n < 2 || !(p >= 0.0 && p <= 1.0)) {
    throw UedError(ErrorCode::kInvalidEpsilon, "need B > 0, p in [0,1] and n >= 2");
  }
  if (!(eps > 0.0 && eps < B * (1.0 - p) / 2.0)) {
    throw UedError(ErrorCode::kInvalidEpsilon, "need 0 < eps < B(1-p)/2");
  }
  BaseGame g;
  g.payoff = Eigen::MatrixXd::Zero(4, n + 1);
  g.payoff(0, 0) = B;
  g.payoff(1, 1) = B;
  g.payoff(2, 0) = B * p + 2.0 * eps;
  g.payoff(3, 1) = B * p + 2.0 * eps;
  for (int t = 2; t <= n; ++t) {
    g.payoff(2, t) = B * p / 2.0 + eps;
    g.payoff(3, t) = B * p / 2.0 + eps;
  }
  return g;
}

DualGame table41_dual_game(double B, double p, double eps, int n) {
  DualGame g;
  g.base = build_table41_game(B, p, eps, n);
  g.p = p;
  g.teacher1.kind = TeacherKind::kRegret;
  g.teacher2.kind = TeacherKind::kUniform;
  Eigen::VectorXd mix = Eigen::VectorXd::Zero(n + 1);
  mix.tail(n - 1).setConstant(1.0 / (n - 1));
  g.teacher2.mixture = mix;
  return g;
}

DualGame random_dual_game(Rng& rng, const RandomGameOptions& options) {
  DualGame g;
  const int np = uniform_int(rng, 1, options.max_students);
  const int nt = uniform_int(rng, 1, options.max_thetas);
  g.base.payoff.resize(np, nt);
  for (int i = 0; i < np; ++i) {
    for (int t = 0; t < nt; ++t) g.base.payoff(i, t) = uniform01(rng);
  }
  g.p = uniform_int(rng, 1, 9) / 10.0;
  g.teacher1.kind = TeacherKind::kRegret;
  if (bernoulli(rng, 0.5)) {
    g.teacher2.kind = TeacherKind::kUniform;
  } else {
    g.teacher2.kind = TeacherKind::kCustom;
    g.teacher2.utility.resize(np, nt);
    for (int i = 0; i < np; ++i) {
      for (int t = 0; t < nt; ++t) g.teacher2.utility(i, t) = uniform01(rng);
    }
  }
  return g;
}

GameAnalysis analyze_game(const DualGame& game, double tol) {
  GameAnalysis a;
  a.minimax = minimax_regret(game.base);
  a.equilibrium = find_equilibrium(game, 20, tol);
  a.equilibrium_worst_case_regret = worst_case_regret(game.base, a.equilibrium.profile.student);
  a.theorem1 = verify_theorem1(game, a.equilibrium, tol, false);
  return a;
}

namespace {

json to_json_vec(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json_mat(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    rows.push_back(to_json_vec(m.row(i).transpose()));
  }
  return rows;
}

std::string teacher_kind_name(TeacherKind k) {
  switch (k) {
    case TeacherKind::kRegret: return "regret";
    case TeacherKind::kUniform: return "uniform";
    case TeacherKind::kCustom: return "custom";
  }
  return "regret";
}

TeacherSpec teacher_from_json(const json& j) {
  TeacherSpec spec;
  if (j.is_string()) {
    const std::string k = j.get<std::string>();
    if (k == "regret") return spec;
    if (k == "uniform") {
      spec.kind = TeacherKind::kUniform;
      return spec;
    }
    throw UedError(ErrorCode::kConfigInvalid, "unknown teacher kind '" + k + "'");
  }
  const auto rows = j.get<std::vector<std::vector<double>>>();
  spec.kind = TeacherKind::kCustom;
  spec.utility.resize(static_cast<Eigen::Index>(rows.size()),
                      rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) {
      throw UedError(ErrorCode::kDimensionMismatch, "ragged teacher utility");
    }
    for (std::size_t t = 0; t < rows[i].size(); ++t) spec.utility(i, t) = rows[i][t];
  }
  return spec;
}

}  // namespace

std::string analysis_to_json(const DualGame& game, const GameAnalysis& a) {
  json bounds = json::array();
  for (const BoundCheck& c : a.theorem1.checks) {
    bounds.push_back({{"name", c.name},
                      {"bound", c.bound},
                      {"student_exploitability", c.observed.student},
                      {"teacher_exploitability", c.observed.teacher},
                      {"ok", c.ok}});
  }
  const Exploitability& e = a.equilibrium.certificate;
  json j{
      {"note", "finite-matrix restriction of the dual curriculum game; a verification device"},
      {"p", game.p},
      {"B", a.theorem1.B},
      {"payoffs", to_json_mat(game.base.payoff)},
      {"teacher1", teacher_kind_name(game.teacher1.kind)},
      {"teacher2", teacher_kind_name(game.teacher2.kind)},
      {"minimax_regret", {{"value", a.minimax.value}, {"student", to_json_vec(a.minimax.student)}}},
      {"equilibrium",
       {{"student", to_json_vec(a.equilibrium.profile.student)},
        {"teacher1", to_json_vec(a.equilibrium.profile.teacher1)},
        {"teacher2", to_json_vec(a.equilibrium.profile.teacher2)}}},
      {"exploitabilities", {{"student", e.student}, {"teacher1", e.teacher1}, {"teacher2", e.teacher2}}},
      {"equilibrium_worst_case_regret", a.equilibrium_worst_case_regret},
      {"theorem1_bounds", bounds},
      {"pass", a.theorem1.pass},
  };
  return j.dump(2);
}

DualGame dual_game_from_json(const std::string& text) {
  DualGame g;
  try {
    const json j = json::parse(text);
    const auto rows = j.at("payoffs").get<std::vector<std::vector<double>>>();
    if (rows.empty() || rows[0].empty()) {
      throw UedError(ErrorCode::kDimensionMismatch, "payoffs must be a non-empty matrix");
    }
    g.base.payoff.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows[0].size()) {
        throw UedError(ErrorCode::kDimensionMismatch, "ragged payoff matrix");
      }
      for (std::size_t t = 0; t < rows[i].size(); ++t) g.base.payoff(i, t) = rows[i][t];
    }
    g.p = j.value("p", 0.5);
    g.teacher1 = j.contains("teacher1") ? teacher_from_json(j.at("teacher1")) : TeacherSpec{};
    if (j.contains("teacher2")) {
      g.teacher2 = teacher_from_json(j.at("teacher2"));
    } else {
      g.teacher2.kind = TeacherKind::kUniform;
    }
    if (j.contains("teacher2_mixture")) {
      const auto mix = j.at("teacher2_mixture").get<std::vector<double>>();
      g.teacher2.mixture = Eigen::Map<const Eigen::VectorXd>(mix.data(), static_cast<Eigen::Index>(mix.size()));
    }
  } catch (const json::exception& e) {
    throw UedError(ErrorCode::kConfigInvalid, std::string("payoff file: ") + e.what());
  }
  g.validate();
  return g;
}

}  // namespace ued
