#ifndef UED_POLICY_HPP
#define UED_POLICY_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "ued/common.hpp"

namespace ued {

struct Architecture {
  int input_dim = 0;
  std::vector<int> hidden_dims{64, 64};
  int action_count = 0;
  // When set, the value loss does not backpropagate into the shared encoder.
  bool detach_value_encoder = false;

  bool operator==(const Architecture&) const = default;
};

std::size_t parameter_count(const Architecture& arch);

// Offsets of one dense layer inside the flat parameter vector. Weights are
// stored row-major (out x in), followed by the bias.
struct LayerSlice {
  std::size_t weight_offset = 0;
  std::size_t bias_offset = 0;
  int in = 0;
  int out = 0;
};

struct ParamLayout {
  std::vector<LayerSlice> encoder;
  LayerSlice policy_head;
  LayerSlice value_head;
  std::size_t total = 0;
};

ParamLayout param_layout(const Architecture& arch);

struct PolicyParams {
  Architecture arch;
  Eigen::VectorXd theta;
};

// Orthogonal init with per-layer gains: sqrt(2) hidden, 0.01 policy head,
// 1.0 value head; zero biases.
PolicyParams init_params(const Architecture& arch, Rng& rng);

// Hash of the raw parameter bytes; used to check stop-gradient contracts.
std::uint64_t params_hash(const PolicyParams& params);

struct ForwardOut {
  Eigen::VectorXd logits;
  double value = 0.0;
  std::vector<Eigen::VectorXd> activations;  // input, then each hidden layer
};

// Throws kDimensionMismatch when obs size != arch.input_dim.
ForwardOut forward(const PolicyParams& params, const Eigen::Ref<const Eigen::VectorXd>& obs);

struct BatchForward {
  Eigen::MatrixXd logits;   // N x A
  Eigen::VectorXd values;   // N
  std::vector<Eigen::MatrixXd> activations;  // input (N x in), hidden layers
};

BatchForward forward_batch(const PolicyParams& params, const Eigen::MatrixXd& obs);

Eigen::VectorXd softmax(const Eigen::Ref<const Eigen::VectorXd>& logits);
Eigen::VectorXd log_softmax(const Eigen::Ref<const Eigen::VectorXd>& logits);
double entropy(const Eigen::Ref<const Eigen::VectorXd>& logits);

// A scalar loss over the heads' outputs together with its gradient w.r.t.
// logits and values.
struct HeadLoss {
  double loss = 0.0;
  Eigen::MatrixXd dlogits;  // N x A
  Eigen::VectorXd dvalues;  // N
};

struct LossClosure {
  Eigen::MatrixXd obs;
  std::function<HeadLoss(const BatchForward&)> heads;
};

struct GradResult {
  double loss = 0.0;
  Eigen::VectorXd grad;
};

// Exact gradient by backprop through the fixed architecture. Throws
// kNonFiniteLoss when the loss is not finite.
GradResult grad(const PolicyParams& params, const LossClosure& closure);
double evaluate_loss(const PolicyParams& params, const LossClosure& closure);

struct ActionSample {
  int action = 0;
  double log_prob = 0.0;
};

ActionSample sample_action(const ForwardOut& out, Rng& rng);
ActionSample greedy_action(const ForwardOut& out);

// Checkpoint: one JSON header line, then theta as little-endian float64.
void save_checkpoint(const std::string& path, const PolicyParams& params,
                     std::uint64_t step_count, const std::string& extra_header_json = "{}");
struct Checkpoint {
  PolicyParams params;
  std::uint64_t step_count = 0;
  std::string header_json;
};
Checkpoint load_checkpoint(const std::string& path);

}  // namespace ued

#endif  // UED_POLICY_HPP
