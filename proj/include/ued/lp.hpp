#ifndef UED_LP_HPP
#define UED_LP_HPP

#include <vector>

namespace ued::lp {

enum class Sense { kLe, kGe, kEq };
enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Constraint {
  std::vector<double> a;
  Sense sense = Sense::kLe;
  double b = 0.0;
};

// maximize c.x subject to the constraints; variables are >= 0 unless marked
// free.
struct Problem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Constraint> constraints;
  std::vector<bool> free_vars;
};

struct Solution {
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
};

// Dense two-phase simplex with Bland's rule. Meant for games with a handful
// of strategies.
Solution solve(const Problem& problem, double eps = 1e-11);

}  // namespace ued::lp

#endif  // UED_LP_HPP
