#ifndef UED_DCD_GAMES_HPP
#define UED_DCD_GAMES_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ued/common.hpp"

namespace ued {

// Student payoffs V[pi][theta].
struct BaseGame {
  Eigen::MatrixXd payoff;
  int students() const { return static_cast<int>(payoff.rows()); }
  int thetas() const { return static_cast<int>(payoff.cols()); }
  void validate() const;
};

enum class TeacherKind { kRegret, kUniform, kCustom };

struct TeacherSpec {
  TeacherKind kind = TeacherKind::kRegret;
  Eigen::MatrixXd utility;  // kCustom only
  // kUniform: the mixture the teacher plays (its utility is constant, so the
  // equilibrium conditions leave it free). Defaults to uniform over all thetas.
  std::optional<Eigen::VectorXd> mixture;
};

struct DualGame {
  BaseGame base;
  TeacherSpec teacher1;
  TeacherSpec teacher2;
  double p = 0.5;

  // U_t^i[pi][theta]; the uniform teacher's constant is 0.
  Eigen::MatrixXd teacher_utility(int which) const;
  // Maximum pointwise difference between the two teacher utilities.
  double max_utility_gap() const;
  void validate() const;
};

struct MixedProfile {
  Eigen::VectorXd student;
  Eigen::VectorXd teacher1;
  Eigen::VectorXd teacher2;
};

// Throws kDimensionMismatch unless nonnegative and summing to 1 +- 1e-12.
void validate_mixture(const Eigen::VectorXd& mix, int size, const char* what);

Eigen::MatrixXd regret_matrix(const BaseGame& game);
// max_pi V[pi][theta] - sum_pi mix(pi) V[pi][theta]
double regret_of(const BaseGame& game, const Eigen::VectorXd& student, int theta);
double worst_case_regret(const BaseGame& game, const Eigen::VectorXd& student);

struct MinimaxRegret {
  Eigen::VectorXd student;
  double value = 0.0;
};
MinimaxRegret minimax_regret(const BaseGame& game);

enum class Player { kStudent, kTeacher1, kTeacher2 };

struct BestResponse {
  int strategy = 0;
  double value = 0.0;
};

// Expected payoff of every pure strategy of `player` against the others.
Eigen::VectorXd pure_payoffs(const DualGame& game, const MixedProfile& profile, Player player);
// First maximiser; the uniform teacher answers with index 0.
BestResponse best_response(const DualGame& game, const MixedProfile& profile, Player player);

struct Exploitability {
  double student = 0.0;
  double teacher1 = 0.0;
  double teacher2 = 0.0;
  double max() const;
};

Exploitability exploitability(const DualGame& game, const MixedProfile& profile);

struct Equilibrium {
  MixedProfile profile;
  Exploitability certificate;
};

// Support enumeration with LP feasibility checks; falls back to a grid search
// at `grid_resolution` that reports its best candidate through
// kNoEquilibriumFound when nothing certifies within `tol`.
Equilibrium find_equilibrium(const DualGame& game, int grid_resolution = 20, double tol = 1e-9);

// Exploitability of (student, teacher mixture) in a base game whose teacher
// has utility matrix `teacher_utility`.
struct BaseExploitability {
  double student = 0.0;
  double teacher = 0.0;
};
BaseExploitability base_exploitability(const BaseGame& game, const Eigen::MatrixXd& teacher_utility,
                                       const Eigen::VectorXd& student,
                                       const Eigen::VectorXd& teacher);

struct BoundCheck {
  std::string name;
  double bound = 0.0;
  BaseExploitability observed;
  bool ok = true;
};

struct Theorem1Report {
  double B = 0.0;
  double p = 0.0;
  Eigen::VectorXd joint_teacher;
  std::vector<BoundCheck> checks;  // joint, first, second
  bool pass = true;
};

// Checks the three approximation bounds for the joint teacher
// p*theta1 + (1-p)*theta2. With `throw_on_violation` a failing bound raises
// kBoundViolated naming the player and margin.
Theorem1Report verify_theorem1(const DualGame& game, const Equilibrium& eq, double tol = 1e-9,
                               bool throw_on_violation = true);

// 4 x (n+1) counterexample game. Throws kInvalidEpsilon unless
// eps < B(1-p)/2, B > 0, n >= 2.
BaseGame build_table41_game(double B, double p, double eps, int n);
// The dual game around it: regret teacher plus a uniform teacher playing
// uniformly over theta_2..theta_n.
DualGame table41_dual_game(double B, double p, double eps, int n);

struct RandomGameOptions {
  int max_students = 4;
  int max_thetas = 4;
};
// Payoffs U[0,1]; teacher 1 regret; teacher 2 alternates between uniform and
// a random U[0,1] utility; p from {0.1, ..., 0.9}.
DualGame random_dual_game(Rng& rng, const RandomGameOptions& options = {});

struct GameAnalysis {
  MinimaxRegret minimax;
  Equilibrium equilibrium;
  double equilibrium_worst_case_regret = 0.0;
  Theorem1Report theorem1;
};
GameAnalysis analyze_game(const DualGame& game, double tol = 1e-9);
std::string analysis_to_json(const DualGame& game, const GameAnalysis& analysis);

// {"payoffs": [[...]], "p": .., "teacher1": "regret"|"uniform"|[[...]],
//  "teacher2": ..., "teacher2_mixture"?: [...]}
DualGame dual_game_from_json(const std::string& text);

}  // namespace ued

#endif  // UED_DCD_GAMES_HPP
