#include "ued/policy.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <json.hpp>

namespace ued {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstWeights = Eigen::Map<const RowMatrix>;
using Weights = Eigen::Map<RowMatrix>;

LayerSlice make_slice(std::size_t& offset, int in, int out) {
  LayerSlice s;
  s.in = in;
  s.out = out;
  s.weight_offset = offset;
  offset += static_cast<std::size_t>(in) * static_cast<std::size_t>(out);
  s.bias_offset = offset;
  offset += static_cast<std::size_t>(out);
  return s;
}

ConstWeights weights(const Eigen::VectorXd& theta, const LayerSlice& s) {
  return ConstWeights(theta.data() + s.weight_offset, s.out, s.in);
}

Eigen::Map<const Eigen::VectorXd> bias(const Eigen::VectorXd& theta, const LayerSlice& s) {
  return Eigen::Map<const Eigen::VectorXd>(theta.data() + s.bias_offset, s.out);
}

void check_arch(const Architecture& arch) {
  if (arch.input_dim <= 0 || arch.action_count <= 0) {
    throw UedError(ErrorCode::kDimensionMismatch, "architecture needs positive input/action dims");
  }
  for (int h : arch.hidden_dims) {
    if (h <= 0) throw UedError(ErrorCode::kDimensionMismatch, "hidden dims must be positive");
  }
}

}  // namespace

ParamLayout param_layout(const Architecture& arch) {
  check_arch(arch);
  ParamLayout layout;
  std::size_t offset = 0;
  int in = arch.input_dim;
  for (int h : arch.hidden_dims) {
    layout.encoder.push_back(make_slice(offset, in, h));
    in = h;
  }
  layout.policy_head = make_slice(offset, in, arch.action_count);
  layout.value_head = make_slice(offset, in, 1);
  layout.total = offset;
  return layout;
}

std::size_t parameter_count(const Architecture& arch) { return param_layout(arch).total; }

PolicyParams init_params(const Architecture& arch, Rng& rng) {
  const ParamLayout layout = param_layout(arch);
  PolicyParams params{arch, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.total))};
  auto orthogonal = [&](const LayerSlice& s, double gain) {
    const int rows = std::max(s.out, s.in);
    const int cols = std::min(s.out, s.in);
    Eigen::MatrixXd g(rows, cols);
    for (int c = 0; c < cols; ++c) {
      for (int r = 0; r < rows; ++r) g(r, c) = sample_normal(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
    // Sign fix makes the draw uniform over the orthogonal group.
    const Eigen::MatrixXd r = qr.matrixQR().topRows(cols).template triangularView<Eigen::Upper>();
    for (int c = 0; c < cols; ++c) {
      if (r(c, c) < 0) q.col(c) *= -1.0;
    }
    Weights w(params.theta.data() + s.weight_offset, s.out, s.in);
    if (s.out >= s.in) {
      w = gain * q;
    } else {
      w = gain * q.transpose();
    }
  };
  for (const auto& s : layout.encoder) orthogonal(s, std::sqrt(2.0));
  orthogonal(layout.policy_head, 0.01);
  orthogonal(layout.value_head, 1.0);
  return params;
}

std::uint64_t params_hash(const PolicyParams& params) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(params.theta.data());
  const std::size_t n = static_cast<std::size_t>(params.theta.size()) * sizeof(double);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

ForwardOut forward(const PolicyParams& params, const Eigen::Ref<const Eigen::VectorXd>& obs) {
  if (obs.size() != params.arch.input_dim) {
    throw UedError(ErrorCode::kDimensionMismatch,
                   "observation has " + std::to_string(obs.size()) + " dims, expected " +
                       std::to_string(params.arch.input_dim));
  }
  const ParamLayout layout = param_layout(params.arch);
  ForwardOut out;
  out.activations.reserve(layout.encoder.size() + 1);
  out.activations.emplace_back(obs);
  for (const auto& s : layout.encoder) {
    Eigen::VectorXd z = weights(params.theta, s) * out.activations.back() + bias(params.theta, s);
    out.activations.emplace_back(z.array().tanh().matrix());
  }
  const Eigen::VectorXd& h = out.activations.back();
  out.logits = weights(params.theta, layout.policy_head) * h + bias(params.theta, layout.policy_head);
  out.value = (weights(params.theta, layout.value_head) * h)(0) +
              params.theta[static_cast<Eigen::Index>(layout.value_head.bias_offset)];
  return out;
}

BatchForward forward_batch(const PolicyParams& params, const Eigen::MatrixXd& obs) {
  if (obs.cols() != params.arch.input_dim) {
    throw UedError(ErrorCode::kDimensionMismatch, "batch observation width mismatch");
  }
  const ParamLayout layout = param_layout(params.arch);
  BatchForward out;
  out.activations.reserve(layout.encoder.size() + 1);
  out.activations.push_back(obs);
  for (const auto& s : layout.encoder) {
    Eigen::MatrixXd z = out.activations.back() * weights(params.theta, s).transpose();
    z.rowwise() += bias(params.theta, s).transpose();
    out.activations.emplace_back(z.array().tanh().matrix());
  }
  const Eigen::MatrixXd& h = out.activations.back();
  out.logits = h * weights(params.theta, layout.policy_head).transpose();
  out.logits.rowwise() += bias(params.theta, layout.policy_head).transpose();
  out.values = h * weights(params.theta, layout.value_head).row(0).transpose();
  out.values.array() += params.theta[static_cast<Eigen::Index>(layout.value_head.bias_offset)];
  return out;
}

Eigen::VectorXd log_softmax(const Eigen::Ref<const Eigen::VectorXd>& logits) {
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return (logits.array() - lse).matrix();
}

Eigen::VectorXd softmax(const Eigen::Ref<const Eigen::VectorXd>& logits) {
  Eigen::VectorXd p = (logits.array() - logits.maxCoeff()).exp().matrix();
  return p / p.sum();
}

double entropy(const Eigen::Ref<const Eigen::VectorXd>& logits) {
  const Eigen::VectorXd logp = log_softmax(logits);
  return -(logp.array().exp() * logp.array()).sum();
}

GradResult grad(const PolicyParams& params, const LossClosure& closure) {
  const ParamLayout layout = param_layout(params.arch);
  const BatchForward fw = forward_batch(params, closure.obs);
  HeadLoss head = closure.heads(fw);
  if (!std::isfinite(head.loss)) {
    throw UedError(ErrorCode::kNonFiniteLoss, "loss evaluated to a non-finite value");
  }
  GradResult out;
  out.loss = head.loss;
  out.grad = Eigen::VectorXd::Zero(params.theta.size());
  auto grad_weights = [&](const LayerSlice& s) {
    return Weights(out.grad.data() + s.weight_offset, s.out, s.in);
  };
  auto grad_bias = [&](const LayerSlice& s) {
    return Eigen::Map<Eigen::VectorXd>(out.grad.data() + s.bias_offset, s.out);
  };

  const Eigen::MatrixXd& h = fw.activations.back();
  grad_weights(layout.policy_head) = head.dlogits.transpose() * h;
  grad_bias(layout.policy_head) = head.dlogits.colwise().sum().transpose();
  grad_weights(layout.value_head) = head.dvalues.transpose() * h;
  grad_bias(layout.value_head)(0) = head.dvalues.sum();

  if (layout.encoder.empty()) return out;
  Eigen::MatrixXd dh = head.dlogits * weights(params.theta, layout.policy_head);
  if (!params.arch.detach_value_encoder) {
    dh += head.dvalues * weights(params.theta, layout.value_head);
  }
  for (std::size_t l = layout.encoder.size(); l-- > 0;) {
    const LayerSlice& s = layout.encoder[l];
    const Eigen::MatrixXd& act = fw.activations[l + 1];
    const Eigen::MatrixXd dz = (dh.array() * (1.0 - act.array().square())).matrix();
    grad_weights(s) = dz.transpose() * fw.activations[l];
    grad_bias(s) = dz.colwise().sum().transpose();
    if (l > 0) dh = dz * weights(params.theta, s);
  }
  return out;
}

double evaluate_loss(const PolicyParams& params, const LossClosure& closure) {
  return closure.heads(forward_batch(params, closure.obs)).loss;
}

ActionSample sample_action(const ForwardOut& out, Rng& rng) {
  const Eigen::VectorXd logp = log_softmax(out.logits);
  const Eigen::VectorXd p = logp.array().exp().matrix();
  const auto a = sample_categorical(rng, p.data(), static_cast<std::size_t>(p.size()));
  return {static_cast<int>(a), logp[static_cast<Eigen::Index>(a)]};
}

ActionSample greedy_action(const ForwardOut& out) {
  Eigen::Index best = 0;
  out.logits.maxCoeff(&best);
  return {static_cast<int>(best), log_softmax(out.logits)[best]};
}

void save_checkpoint(const std::string& path, const PolicyParams& params,
                     std::uint64_t step_count, const std::string& extra_header_json) {
  static_assert(std::endian::native == std::endian::little,
                "checkpoint writer assumes a little-endian host");
  nlohmann::json header;
  header["arch"] = {{"input_dim", params.arch.input_dim},
                    {"hidden_dims", params.arch.hidden_dims},
                    {"action_count", params.arch.action_count},
                    {"detach_value_encoder", params.arch.detach_value_encoder}};
  header["step_count"] = step_count;
  header["theta_length"] = params.theta.size();
  header["extra"] = nlohmann::json::parse(extra_header_json);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UedError(ErrorCode::kIoError, "cannot write checkpoint " + path);
  out << header.dump() << '\n';
  out.write(reinterpret_cast<const char*>(params.theta.data()),
            static_cast<std::streamsize>(params.theta.size() * static_cast<Eigen::Index>(sizeof(double))));
  if (!out) throw UedError(ErrorCode::kIoError, "short write to checkpoint " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UedError(ErrorCode::kIoError, "cannot open checkpoint " + path);
  std::string line;
  std::getline(in, line);
  Checkpoint ckpt;
  try {
    const auto header = nlohmann::json::parse(line);
    const auto& arch = header.at("arch");
    ckpt.params.arch.input_dim = arch.at("input_dim").get<int>();
    ckpt.params.arch.hidden_dims = arch.at("hidden_dims").get<std::vector<int>>();
    ckpt.params.arch.action_count = arch.at("action_count").get<int>();
    ckpt.params.arch.detach_value_encoder = arch.value("detach_value_encoder", false);
    ckpt.step_count = header.at("step_count").get<std::uint64_t>();
    ckpt.header_json = line;
  } catch (const nlohmann::json::exception& e) {
    throw UedError(ErrorCode::kIoError, "bad checkpoint header in " + path + ": " + e.what());
  }
  const auto n = static_cast<Eigen::Index>(parameter_count(ckpt.params.arch));
  ckpt.params.theta.resize(n);
  in.read(reinterpret_cast<char*>(ckpt.params.theta.data()),
          static_cast<std::streamsize>(n * static_cast<Eigen::Index>(sizeof(double))));
  if (in.gcount() != static_cast<std::streamsize>(n * static_cast<Eigen::Index>(sizeof(double)))) {
    throw UedError(ErrorCode::kIoError, "truncated checkpoint " + path);
  }
  return ckpt;
}

}  // namespace ued
