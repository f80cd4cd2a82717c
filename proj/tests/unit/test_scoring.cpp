#include <doctest.h>

#include <cmath>

#include "ued/scoring.hpp"

using namespace ued;

namespace {

// Terminal trajectory whose TD errors (gamma = 1) are exactly `deltas`.
Trajectory from_deltas(const std::vector<double>& deltas) {
  Trajectory t;
  const std::size_t n = deltas.size();
  t.values.assign(n, 0.0);
  t.rewards = deltas;
  t.obs.assign(n, Eigen::VectorXd::Zero(1));
  t.actions.assign(n, 0);
  t.log_probs.assign(n, 0.0);
  t.dones.assign(n, 0);
  t.dones.back() = 1;
  return t;
}

ScoreParams params(ScoreKind kind) {
  ScoreParams p;
  p.kind = kind;
  p.gamma = 1.0;
  p.lambda = 1.0;
  return p;
}

}  // namespace

TEST_CASE("value-based scores worked example") {
  const Trajectory t = from_deltas({1.0, -0.5});
  CHECK(score_trajectory(t, params(ScoreKind::kL1ValueLoss)) == doctest::Approx(0.5));
  CHECK(score_trajectory(t, params(ScoreKind::kPVL)) == doctest::Approx(0.25));
  CHECK(score_trajectory(t, params(ScoreKind::kOneStepTD)) == doctest::Approx(0.75));
  CHECK(score_trajectory(t, params(ScoreKind::kGAE)) == doctest::Approx(0.0));
}

TEST_CASE("zero td errors score zero") {
  const Trajectory t = from_deltas({0.0, 0.0, 0.0});
  for (auto k : {ScoreKind::kL1ValueLoss, ScoreKind::kGAE, ScoreKind::kOneStepTD, ScoreKind::kPVL}) {
    CHECK(score_trajectory(t, params(k)) == 0.0);
  }
}

TEST_CASE("max mc") {
  Trajectory t = from_deltas({0.0, 0.0});
  t.values = {0.5, 0.5};
  CHECK(score_trajectory(t, params(ScoreKind::kMaxMC), 1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(score_trajectory(t, params(ScoreKind::kMaxMC)), UedError);
  ScoreParams dense = params(ScoreKind::kMaxMC);
  dense.max_mc_dense = true;
  t.values = {0.2, 0.9};
  CHECK(score_trajectory(t, dense, 1.0) == doctest::Approx(0.8));
}

TEST_CASE("classifier-style scores") {
  Trajectory t = from_deltas({0.0, 0.0});
  CHECK_THROWS_AS(score_trajectory(t, params(ScoreKind::kPolicyEntropy)), UedError);
  t.dists.assign(2, Eigen::Vector3d::Constant(1.0 / 3.0));
  CHECK(score_trajectory(t, params(ScoreKind::kPolicyEntropy)) == doctest::Approx(std::log(3.0)));
  t.dists.assign(2, Eigen::Vector3d(0.5, 0.3, 0.2));
  CHECK(score_trajectory(t, params(ScoreKind::kMinMargin)) == doctest::Approx(0.2));
  CHECK(score_trajectory(t, params(ScoreKind::kLeastConfidence)) == doctest::Approx(0.5));
}

TEST_CASE("score orderings and the absolute-value split") {
  Rng rng = make_rng(1, "score-props");
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = uniform_int(rng, 1, 40);
    Trajectory t;
    for (int i = 0; i < n; ++i) {
      t.rewards.push_back(bernoulli(rng, 0.2) ? uniform01(rng) : 0.0);
      t.values.push_back(uniform01(rng));
      t.obs.push_back(Eigen::VectorXd::Zero(1));
      t.actions.push_back(0);
      t.log_probs.push_back(0.0);
      t.dones.push_back(0);
    }
    t.dones.back() = 1;
    ScoreParams sp;
    sp.gamma = 0.99;
    sp.lambda = 0.95;
    auto score = [&](ScoreKind k) {
      sp.kind = k;
      return score_trajectory(t, sp);
    };
    const double l1 = score(ScoreKind::kL1ValueLoss);
    const double pvl = score(ScoreKind::kPVL);
    const double gae = score(ScoreKind::kGAE);
    CHECK(l1 >= std::abs(gae) - 1e-12);
    CHECK(l1 >= pvl - 1e-12);
    CHECK(pvl >= 0.0);
    const Advantages a = compute_gae(t, sp.gamma, sp.lambda);
    double neg = 0.0;
    for (double x : a.advantages) neg += std::max(-x, 0.0);
    CHECK(std::abs(pvl + neg / n - l1) < 1e-12);
    // Pure function: a second call agrees exactly.
    CHECK(score(ScoreKind::kPVL) == pvl);
  }
}

TEST_CASE("score names round trip") {
  for (auto k : {ScoreKind::kPolicyEntropy, ScoreKind::kMinMargin, ScoreKind::kLeastConfidence,
                 ScoreKind::kOneStepTD, ScoreKind::kGAE, ScoreKind::kL1ValueLoss, ScoreKind::kPVL,
                 ScoreKind::kMaxMC}) {
    CHECK(score_kind_from_name(score_kind_name(k)) == k);
  }
  CHECK(score_kind_name(ScoreKind::kL1ValueLoss) == "l1_value_loss");
  CHECK_THROWS_AS(score_kind_from_name("regret"), UedError);
}
