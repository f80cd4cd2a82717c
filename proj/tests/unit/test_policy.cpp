#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "ued/policy.hpp"
#include "ued/ppo.hpp"

using namespace ued;

namespace {

Architecture small_arch(bool detach = false) {
  Architecture a;
  a.input_dim = 7;
  a.hidden_dims = {6, 5};
  a.action_count = 3;
  a.detach_value_encoder = detach;
  return a;
}

PolicyParams random_params(const Architecture& arch, Rng& rng, double scale = 0.5) {
  PolicyParams p{arch, Eigen::VectorXd(parameter_count(arch))};
  for (Eigen::Index i = 0; i < p.theta.size(); ++i) p.theta[i] = scale * sample_normal(rng);
  return p;
}

Eigen::VectorXd random_vec(int n, Rng& rng) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = sample_normal(rng);
  return v;
}

// Straight-line evaluation with explicit loops.
std::pair<std::vector<double>, double> reference_forward(const PolicyParams& p, const Eigen::VectorXd& obs) {
  const ParamLayout lay = param_layout(p.arch);
  auto dense = [&](const LayerSlice& s, const std::vector<double>& in, bool act) {
    std::vector<double> out(s.out);
    for (int o = 0; o < s.out; ++o) {
      double acc = p.theta[s.bias_offset + o];
      for (int i = 0; i < s.in; ++i) acc += p.theta[s.weight_offset + o * s.in + i] * in[i];
      out[o] = act ? std::tanh(acc) : acc;
    }
    return out;
  };
  std::vector<double> h(obs.data(), obs.data() + obs.size());
  for (const LayerSlice& s : lay.encoder) h = dense(s, h, true);
  return {dense(lay.policy_head, h, false), dense(lay.value_head, h, false)[0]};
}

}  // namespace

TEST_CASE("zero weights give a uniform policy and zero value") {
  const Architecture arch = small_arch();
  PolicyParams p{arch, Eigen::VectorXd::Zero(parameter_count(arch))};
  Rng rng = make_rng(1, "zero");
  const ForwardOut out = forward(p, random_vec(arch.input_dim, rng));
  const Eigen::VectorXd pi = softmax(out.logits);
  for (int a = 0; a < 3; ++a) CHECK(pi[a] == doctest::Approx(1.0 / 3.0));
  CHECK(out.value == 0.0);
  CHECK(entropy(out.logits) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
}

TEST_CASE("forward matches a loop re-implementation") {
  Rng rng = make_rng(2, "fwd");
  for (int trial = 0; trial < 50; ++trial) {
    const PolicyParams p = random_params(small_arch(), rng);
    const Eigen::VectorXd obs = random_vec(7, rng);
    const ForwardOut out = forward(p, obs);
    const auto [logits, value] = reference_forward(p, obs);
    for (int a = 0; a < 3; ++a) CHECK(std::abs(out.logits[a] - logits[a]) < 1e-12);
    CHECK(std::abs(out.value - value) < 1e-12);
    CHECK(std::abs(softmax(out.logits).sum() - 1.0) < 1e-12);
  }
}

TEST_CASE("batched forward agrees with single forward") {
  Rng rng = make_rng(3, "batch");
  const PolicyParams p = random_params(small_arch(), rng);
  Eigen::MatrixXd obs(5, 7);
  for (int r = 0; r < 5; ++r) obs.row(r) = random_vec(7, rng).transpose();
  const BatchForward bf = forward_batch(p, obs);
  for (int r = 0; r < 5; ++r) {
    const ForwardOut single = forward(p, obs.row(r).transpose());
    CHECK((bf.logits.row(r).transpose() - single.logits).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(bf.values[r] - single.value) < 1e-12);
  }
}

TEST_CASE("wrong input size throws") {
  Rng rng = make_rng(4, "dim");
  const PolicyParams p = random_params(small_arch(), rng);
  CHECK_THROWS_AS(forward(p, Eigen::VectorXd::Zero(3)), UedError);
}

TEST_CASE("parameter count") {
  Architecture a;
  a.input_dim = 10;
  a.hidden_dims = {64, 64};
  a.action_count = 3;
  CHECK(parameter_count(a) == (10 * 64 + 64) + (64 * 64 + 64) + (64 * 3 + 3) + (64 + 1));
  CHECK(param_layout(a).total == parameter_count(a));
}

TEST_CASE("constant loss has zero gradient") {
  Rng rng = make_rng(5, "const");
  const PolicyParams p = random_params(small_arch(), rng);
  LossClosure c;
  c.obs = Eigen::MatrixXd::Random(4, 7);
  c.heads = [](const BatchForward& fw) {
    HeadLoss h;
    h.loss = 3.0;
    h.dlogits = Eigen::MatrixXd::Zero(fw.logits.rows(), fw.logits.cols());
    h.dvalues = Eigen::VectorXd::Zero(fw.values.size());
    return h;
  };
  const GradResult g = grad(p, c);
  CHECK(g.loss == 3.0);
  CHECK(g.grad.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("non-finite loss throws") {
  Rng rng = make_rng(6, "nan");
  const PolicyParams p = random_params(small_arch(), rng);
  LossClosure c;
  c.obs = Eigen::MatrixXd::Random(2, 7);
  c.heads = [](const BatchForward& fw) {
    HeadLoss h;
    h.loss = std::nan("");
    h.dlogits = Eigen::MatrixXd::Zero(fw.logits.rows(), fw.logits.cols());
    h.dvalues = Eigen::VectorXd::Zero(fw.values.size());
    return h;
  };
  CHECK_THROWS_AS(grad(p, c), UedError);
}

TEST_CASE("value-only loss leaves the policy head alone") {
  Rng rng = make_rng(7, "value-only");
  for (bool detach : {false, true}) {
    const PolicyParams p = random_params(small_arch(detach), rng);
    LossClosure c;
    c.obs = Eigen::MatrixXd::Random(4, 7);
    c.heads = [](const BatchForward& fw) {
      HeadLoss h;
      h.loss = 0.5 * fw.values.squaredNorm();
      h.dlogits = Eigen::MatrixXd::Zero(fw.logits.rows(), fw.logits.cols());
      h.dvalues = fw.values;
      return h;
    };
    const GradResult g = grad(p, c);
    const ParamLayout lay = param_layout(p.arch);
    const std::size_t head_len = lay.policy_head.out * (lay.policy_head.in + 1);
    const Eigen::VectorXd head = g.grad.segment(lay.policy_head.weight_offset, head_len);
    CHECK(head.cwiseAbs().maxCoeff() == 0.0);
    const std::size_t enc_end = lay.policy_head.weight_offset;
    const double enc = g.grad.head(enc_end).cwiseAbs().maxCoeff();
    if (detach) CHECK(enc == 0.0);
    else CHECK(enc > 0.0);
  }
}

TEST_CASE("sampling") {
  PolicyParams p;
  ForwardOut out;
  out.logits = Eigen::Vector3d(10, -10, -10);
  Rng rng = make_rng(8, "sample");
  int zeros = 0;
  for (int i = 0; i < 10000; ++i) {
    const ActionSample s = sample_action(out, rng);
    zeros += s.action == 0;
    CHECK(std::abs(s.log_prob - log_softmax(out.logits)[s.action]) < 1e-12);
  }
  CHECK(zeros / 10000.0 > 0.999);
  out.logits = Eigen::Vector3d(0.1, 0.7, -0.2);
  CHECK(greedy_action(out).action == 1);
}

TEST_CASE("checkpoint round trip") {
  Rng rng = make_rng(9, "ckpt");
  const PolicyParams p = random_params(small_arch(true), rng);
  const auto path = (std::filesystem::temp_directory_path() / "ued_policy_test.ckpt").string();
  save_checkpoint(path, p, 42, R"({"note":"x"})");
  const Checkpoint c = load_checkpoint(path);
  CHECK(c.step_count == 42);
  CHECK(c.params.arch == p.arch);
  CHECK(c.params.theta == p.theta);
  CHECK(params_hash(c.params) == params_hash(p));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_checkpoint(path), UedError);
}
