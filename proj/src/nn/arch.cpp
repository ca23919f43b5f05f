#include "xfer/nn/arch.hpp"

#include <cmath>

#include "xfer/error.hpp"

namespace xfer::nn {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidConfig, what);
}

Linear make_linear(std::size_t in, std::size_t out, double stddev, bool bias, numkit::RngStream& rng) {
  Linear l{Matrix(out, in), bias ? Matrix(1, out) : Matrix()};
  for (auto& v : l.w.values()) v = rng.normal(0.0, stddev);
  return l;
}

void push_linear(std::vector<TensorRef>& out, const std::string& prefix, Linear& l) {
  out.push_back({prefix + ".weight", &l.w, TensorKind::Weight});
  if (!l.b.empty()) out.push_back({prefix + ".bias", &l.b, TensorKind::Bias});
}

Linear zeros_like(const Linear& l) {
  return {Matrix(l.w.rows(), l.w.cols()), Matrix(l.b.rows(), l.b.cols())};
}

}  // namespace

std::string loss_name(LossKind k) { return k == LossKind::Softmax ? "softmax" : "cosine"; }

LossKind loss_from_name(const std::string& name) {
  if (name == "softmax") return LossKind::Softmax;
  if (name == "cosine") return LossKind::CosineSoftmax;
  throw Error(ErrorCode::InvalidConfig, "unknown loss '" + name + "' (softmax|cosine)");
}

void ArchSpec::validate() const {
  require(input_dim >= 1, "input_dim must be >= 1");
  require(!encoder_widths.empty(), "encoder needs at least one stage");
  for (auto w : encoder_widths) require(w >= 1, "encoder widths must be >= 1");
  require(num_classes >= 2, "num_classes must be >= 2");
  require(beta > 0.0 && std::isfinite(beta), "beta must be positive");
}

std::size_t ArchSpec::hidden_dim() const {
  return projector_hidden ? projector_hidden : 4 * feature_dim();
}

std::size_t ArchSpec::projected_dim() const {
  return projector_out ? projector_out : std::max<std::size_t>(1, feature_dim() / 4);
}

void TrainConfig::validate() const {
  require(warmup_epochs >= 0.0, "warmup_epochs must be >= 0");
  require(static_cast<double>(epochs) > warmup_epochs, "epochs must exceed warmup_epochs");
  require(batch_size >= 2, "batch_size must be >= 2 (batch norm needs batch statistics)");
  require(base_lr >= 0.0 && std::isfinite(base_lr), "base_lr must be finite and >= 0");
  require(warmup_start_lr >= 0.0 && std::isfinite(warmup_start_lr), "warmup_start_lr must be finite and >= 0");
  require(momentum >= 0.0 && momentum < 1.0, "momentum must be in [0, 1)");
  require(weight_decay >= 0.0, "weight_decay must be >= 0");
  require(checkpoint_every >= 1, "checkpoint_every must be >= 1");
  require(bn_epsilon > 0.0, "bn_epsilon must be > 0");
  require(bn_momentum >= 0.0 && bn_momentum <= 1.0, "bn_momentum must be in [0, 1]");
}

std::vector<TensorRef> ModelParams::trainable() {
  std::vector<TensorRef> out;
  for (std::size_t s = 0; s < encoder.size(); ++s) push_linear(out, "encoder." + std::to_string(s + 1), encoder[s]);
  if (has_projector) {
    push_linear(out, "projector.fc1", fc1);
    out.push_back({"projector.bn.gamma", &bn.gamma, TensorKind::BnAffine});
    out.push_back({"projector.bn.beta", &bn.beta, TensorKind::BnAffine});
    push_linear(out, "projector.fc2", fc2);
  }
  push_linear(out, "head", head);
  return out;
}

std::vector<TensorRef> ModelParams::buffers() {
  if (!has_projector) return {};
  return {{"projector.bn.running_mean", &bn.running_mean, TensorKind::Buffer},
          {"projector.bn.running_var", &bn.running_var, TensorKind::Buffer}};
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z;
  for (const auto& l : encoder) z.encoder.push_back(nn::zeros_like(l));
  z.has_projector = has_projector;
  z.fc1 = nn::zeros_like(fc1);
  z.fc2 = nn::zeros_like(fc2);
  z.head = nn::zeros_like(head);
  z.bn = {Matrix(bn.gamma.rows(), bn.gamma.cols()), Matrix(bn.beta.rows(), bn.beta.cols()),
          Matrix(bn.running_mean.rows(), bn.running_mean.cols()),
          Matrix(bn.running_var.rows(), bn.running_var.cols())};
  return z;
}

ModelParams init_params(const ArchSpec& arch, numkit::RngStream& rng) {
  arch.validate();
  ModelParams p;
  std::size_t in = arch.input_dim;
  for (auto w : arch.encoder_widths) {
    p.encoder.push_back(make_linear(in, w, std::sqrt(2.0 / static_cast<double>(in)), true, rng));
    in = w;
  }
  if (arch.use_projector) {
    const std::size_t h = arch.hidden_dim();
    p.has_projector = true;
    p.fc1 = make_linear(in, h, std::sqrt(2.0 / static_cast<double>(in)), true, rng);
    p.bn = {Matrix(1, h, 1.0), Matrix(1, h, 0.0), Matrix(1, h, 0.0), Matrix(1, h, 1.0)};
    p.fc2 = make_linear(h, arch.projected_dim(), std::sqrt(1.0 / static_cast<double>(h)), true, rng);
    in = arch.projected_dim();
  }
  p.head = make_linear(in, arch.num_classes, std::sqrt(1.0 / static_cast<double>(in)), arch.classifier_bias, rng);
  return p;
}

nlohmann::json to_json(const ArchSpec& a) {
  return {{"input_dim", a.input_dim},
          {"encoder_widths", a.encoder_widths},
          {"use_projector", a.use_projector},
          {"projector_hidden", a.hidden_dim()},
          {"projector_out", a.projected_dim()},
          {"num_classes", a.num_classes},
          {"loss", loss_name(a.loss)},
          {"beta", a.beta},
          {"classifier_bias", a.classifier_bias}};
}

ArchSpec arch_from_json(const nlohmann::json& j) {
  try {
    ArchSpec a;
    a.input_dim = j.at("input_dim").get<std::size_t>();
    a.encoder_widths = j.at("encoder_widths").get<std::vector<std::size_t>>();
    a.use_projector = j.at("use_projector").get<bool>();
    a.projector_hidden = j.at("projector_hidden").get<std::size_t>();
    a.projector_out = j.at("projector_out").get<std::size_t>();
    a.num_classes = j.at("num_classes").get<std::size_t>();
    a.loss = loss_from_name(j.at("loss").get<std::string>());
    a.beta = j.at("beta").get<double>();
    a.classifier_bias = j.at("classifier_bias").get<bool>();
    a.validate();
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvariantViolation, std::string("arch: ") + e.what());
  }
}

nlohmann::json to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"base_lr", c.base_lr},
          {"warmup_epochs", c.warmup_epochs},
          {"warmup_start_lr", c.warmup_start_lr},
          {"momentum", c.momentum},
          {"weight_decay", c.weight_decay},
          {"seed", c.seed},
          {"checkpoint_every", c.checkpoint_every},
          {"bn_epsilon", c.bn_epsilon},
          {"bn_momentum", c.bn_momentum}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  try {
    TrainConfig c;
    c.epochs = j.at("epochs").get<std::size_t>();
    c.batch_size = j.at("batch_size").get<std::size_t>();
    c.base_lr = j.at("base_lr").get<double>();
    c.warmup_epochs = j.at("warmup_epochs").get<double>();
    c.warmup_start_lr = j.at("warmup_start_lr").get<double>();
    c.momentum = j.at("momentum").get<double>();
    c.weight_decay = j.at("weight_decay").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.checkpoint_every = j.at("checkpoint_every").get<std::size_t>();
    c.bn_epsilon = j.at("bn_epsilon").get<double>();
    c.bn_momentum = j.at("bn_momentum").get<double>();
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvariantViolation, std::string("train config: ") + e.what());
  }
}

}  // namespace xfer::nn
