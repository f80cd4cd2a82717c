#include "ued/lp.hpp"

#include <cmath>
#include <limits>

#include "ued/common.hpp"

namespace ued::lp {

namespace {

struct Tableau {
  std::vector<std::vector<double>> t;  // m rows x (cols + 1), last column rhs
  std::vector<int> basis;
  int cols = 0;

  double& rhs(int i) { return t[i][cols]; }

  void pivot(int r, int c) {
    const double piv = t[r][c];
    for (double& v : t[r]) v /= piv;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (static_cast<int>(i) == r) continue;
      const double f = t[i][c];
      if (f == 0.0) continue;
      for (int j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
    }
    basis[r] = c;
  }

  // Maximizes cost.x over columns with allowed[j]. Returns false when unbounded.
  bool optimize(const std::vector<double>& cost, const std::vector<bool>& allowed, double eps) {
    const int m = static_cast<int>(t.size());
    for (int iter = 0; iter < 100000; ++iter) {
      int enter = -1;
      for (int j = 0; j < cols && enter < 0; ++j) {
        if (!allowed[j]) continue;
        double reduced = -cost[j];
        for (int i = 0; i < m; ++i) reduced += cost[basis[i]] * t[i][j];
        if (reduced < -eps) enter = j;
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (t[i][enter] > eps) {
          const double ratio = rhs(i) / t[i][enter];
          if (ratio < best - 1e-14 || (std::abs(ratio - best) <= 1e-14 && leave >= 0 && basis[i] < basis[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw UedError(ErrorCode::kNoEquilibriumFound, "simplex iteration limit");
  }
};

}  // namespace

Solution solve(const Problem& problem, double eps) {
  const int n = problem.num_vars;
  std::vector<bool> is_free = problem.free_vars;
  is_free.resize(static_cast<std::size_t>(n), false);
  // Column map: structural (with split negatives), slacks, artificials.
  std::vector<int> neg_col(static_cast<std::size_t>(n), -1);
  int cols = n;
  for (int j = 0; j < n; ++j) {
    if (is_free[j]) neg_col[j] = cols++;
  }
  const int m = static_cast<int>(problem.constraints.size());
  std::vector<int> slack_col(m, -1);
  std::vector<int> art_col(m, -1);
  std::vector<Sense> senses(m);
  std::vector<double> sign(m, 1.0);
  for (int i = 0; i < m; ++i) {
    const Constraint& c = problem.constraints[i];
    Sense s = c.sense;
    if (c.b < 0.0) {
      sign[i] = -1.0;
      if (s == Sense::kLe) s = Sense::kGe;
      else if (s == Sense::kGe) s = Sense::kLe;
    }
    senses[i] = s;
    if (s != Sense::kEq) slack_col[i] = cols++;
  }
  const int first_art = cols;
  for (int i = 0; i < m; ++i) {
    if (senses[i] != Sense::kLe) art_col[i] = cols++;
  }

  Tableau tab;
  tab.cols = cols;
  tab.t.assign(m, std::vector<double>(cols + 1, 0.0));
  tab.basis.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    const Constraint& c = problem.constraints[i];
    for (int j = 0; j < n && j < static_cast<int>(c.a.size()); ++j) {
      tab.t[i][j] = sign[i] * c.a[j];
      if (neg_col[j] >= 0) tab.t[i][neg_col[j]] = -sign[i] * c.a[j];
    }
    tab.t[i][cols] = sign[i] * c.b;
    if (senses[i] == Sense::kLe) {
      tab.t[i][slack_col[i]] = 1.0;
      tab.basis[i] = slack_col[i];
    } else {
      if (senses[i] == Sense::kGe) tab.t[i][slack_col[i]] = -1.0;
      tab.t[i][art_col[i]] = 1.0;
      tab.basis[i] = art_col[i];
    }
  }

  Solution sol;
  std::vector<bool> allowed(cols, true);
  if (first_art < cols) {
    std::vector<double> phase1(cols, 0.0);
    for (int j = first_art; j < cols; ++j) phase1[j] = -1.0;
    tab.optimize(phase1, allowed, eps);
    double infeas = 0.0;
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] >= first_art) infeas += tab.rhs(i);
    }
    if (infeas > 1e-9) return sol;
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] < first_art) continue;
      for (int j = 0; j < first_art; ++j) {
        if (std::abs(tab.t[i][j]) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
      }
    }
    for (int j = first_art; j < cols; ++j) allowed[j] = false;
  }
  std::vector<double> cost(cols, 0.0);
  for (int j = 0; j < n && j < static_cast<int>(problem.objective.size()); ++j) {
    cost[j] = problem.objective[j];
    if (neg_col[j] >= 0) cost[neg_col[j]] = -problem.objective[j];
  }
  if (!tab.optimize(cost, allowed, eps)) {
    sol.status = Status::kUnbounded;
    return sol;
  }
  std::vector<double> value(cols, 0.0);
  for (int i = 0; i < m; ++i) value[tab.basis[i]] = tab.rhs(i);
  sol.status = Status::kOptimal;
  sol.x.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    sol.x[j] = value[j] - (neg_col[j] >= 0 ? value[neg_col[j]] : 0.0);
    if (j < static_cast<int>(problem.objective.size())) sol.objective += problem.objective[j] * sol.x[j];
  }
  return sol;
}

}  // namespace ued::lp
