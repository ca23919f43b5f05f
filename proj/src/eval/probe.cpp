#include "xfer/eval/probe.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "xfer/error.hpp"
#include "xfer/nn/model.hpp"
#include "xfer/nn/optim.hpp"
#include "xfer/numkit/kernels.hpp"

namespace xfer::eval {

using numkit::Matrix;

namespace {

Matrix probe_logits(const Matrix& x, const Matrix& w, const Matrix& b) {
  Matrix z = numkit::matmul_nt(x, w);
  for (std::size_t i = 0; i < z.rows(); ++i)
    for (std::size_t j = 0; j < z.cols(); ++j) z(i, j) += b(0, j);
  return z;
}

// Returns test top-1, or a negative value when training diverged.
double probe_one(const FeatureSet& train, const FeatureSet& test, const ProbeConfig& cfg, double lr0) {
  const std::size_t n = train.num_samples(), d = train.dim(), c = train.num_classes();
  Matrix w(c, d), b(1, c), vw(c, d), vb(1, c);
  const std::size_t per_epoch = (n + cfg.batch_size - 1) / cfg.batch_size;
  const double total = static_cast<double>(cfg.epochs * per_epoch);
  numkit::RngStream rng(cfg.seed);
  std::vector<std::size_t> order(n);
  std::vector<std::uint32_t> labels;
  std::size_t step = 0;
  for (std::size_t e = 0; e < cfg.epochs; ++e) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    for (std::size_t lo = 0; lo < n; lo += cfg.batch_size) {
      const std::size_t hi = std::min(n, lo + cfg.batch_size);
      const std::span<const std::size_t> rows(order.data() + lo, hi - lo);
      const Matrix x = train.features().gather_rows(rows);
      labels.resize(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) labels[i] = train.labels()[rows[i]];
      const auto lg = nn::softmax_ce(probe_logits(x, w, b), labels);
      if (!std::isfinite(lg.loss)) return -1.0;
      const Matrix gw = numkit::matmul_tn(lg.dlogits, x);
      Matrix gb(1, c);
      for (std::size_t i = 0; i < lg.dlogits.rows(); ++i)
        for (std::size_t j = 0; j < c; ++j) gb(0, j) += lg.dlogits(i, j);
      const double lr = 0.5 * lr0 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(step) / total));
      nn::sgd_update(w, gw, vw, lr, cfg.momentum, 0.0);
      nn::sgd_update(b, gb, vb, lr, cfg.momentum, 0.0);
      ++step;
    }
  }
  if (!w.all_finite() || !b.all_finite()) return -1.0;
  const auto pred = nn::argmax_rows(probe_logits(test.features(), w, b));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == test.labels()[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

}  // namespace

void ProbeConfig::validate() const {
  if (sweep.empty()) throw Error(ErrorCode::InvalidConfig, "probe sweep is empty");
  if (epochs < 1) throw Error(ErrorCode::InvalidConfig, "probe epochs must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::InvalidConfig, "probe batch size must be >= 1");
  if (!(lr_scale > 0.0)) throw Error(ErrorCode::InvalidConfig, "probe lr scale must be positive");
  for (double lr : sweep)
    if (!(lr > 0.0) || !std::isfinite(lr)) throw Error(ErrorCode::InvalidConfig, "probe learning rates must be positive");
}

ProbeResult linear_probe(const FeatureSet& train, const FeatureSet& test, const ProbeConfig& cfg) {
  cfg.validate();
  if (train.dim() != test.dim())
    throw Error(ErrorCode::DimensionMismatch, "probe train/test widths differ");
  if (train.num_classes() != test.num_classes() ||
      !std::equal(train.class_domains().begin(), train.class_domains().end(), test.class_domains().begin()))
    throw Error(ErrorCode::ClassMismatch, "probe train/test class sets differ");
  ProbeResult r;
  for (double lr : cfg.sweep) {
    const double eff = lr * cfg.lr_scale;
    const double acc = probe_one(train, test, cfg, eff);
    r.lrs.push_back(eff);
    r.diverged.push_back(acc < 0.0);
    r.top1.push_back(acc < 0.0 ? 0.0 : acc);
    if (r.top1.size() == 1 || r.top1.back() > r.best_top1) {
      r.best_top1 = r.top1.back();
      r.chosen_lr = eff;
    }
  }
  return r;
}

FeatureSet extract_features(const nn::Checkpoint& ckpt, const FeatureSet& set, std::size_t stage) {
  if (stage < 1 || stage > ckpt.arch.stages()) {
    throw Error(ErrorCode::OutOfRange, "stage " + std::to_string(stage) + " outside [1, " +
                                           std::to_string(ckpt.arch.stages()) + "]");
  }
  if (set.dim() != ckpt.arch.input_dim)
    throw Error(ErrorCode::DimensionMismatch, "data width " + std::to_string(set.dim()) +
                                                  " != checkpoint input_dim " + std::to_string(ckpt.arch.input_dim));
  nn::ModelParams enc;
  enc.encoder.assign(ckpt.params.encoder.begin(), ckpt.params.encoder.begin() + static_cast<std::ptrdiff_t>(stage));
  auto acts = nn::forward_encoder(enc, set.features());
  return set.with_features(std::move(acts.back()));
}

std::vector<ProbeResult> stage_wise_eval(const nn::Checkpoint& ckpt, const FeatureSet& eval_train,
                                         const FeatureSet& eval_test, const ProbeConfig& cfg) {
  std::vector<ProbeResult> out;
  for (std::size_t s = 1; s <= ckpt.arch.stages(); ++s)
    out.push_back(linear_probe(extract_features(ckpt, eval_train, s), extract_features(ckpt, eval_test, s), cfg));
  return out;
}

nlohmann::json to_json(const ProbeResult& r) {
  nlohmann::json per = nlohmann::json::array();
  for (std::size_t i = 0; i < r.lrs.size(); ++i)
    per.push_back({{"lr", r.lrs[i]}, {"top1", r.top1[i]}, {"diverged", static_cast<bool>(r.diverged[i])}});
  return {{"best_top1", r.best_top1}, {"chosen_lr", r.chosen_lr}, {"per_lr", per}};
}

nlohmann::json to_json(const ProbeConfig& c) {
  return {{"epochs", c.epochs}, {"sweep", c.sweep},         {"lr_scale", c.lr_scale},
          {"batch_size", c.batch_size}, {"momentum", c.momentum}, {"seed", c.seed}};
}

}  // namespace xfer::eval
