#include "xfer/nn/optim.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "xfer/error.hpp"

namespace xfer::nn {

double lr_at(const TrainConfig& cfg, double t) {
  const auto total = static_cast<double>(cfg.epochs);
  if (!(t >= 0.0 && t <= total)) {
    throw Error(ErrorCode::OutOfRange, "lr_at: t = " + std::to_string(t) + " outside [0, " +
                                           std::to_string(total) + "]");
  }
  const double w = cfg.warmup_epochs;
  if (t < w) return cfg.warmup_start_lr + (cfg.base_lr - cfg.warmup_start_lr) * (t / w);
  return 0.5 * cfg.base_lr * (1.0 + std::cos(std::numbers::pi * (t - w) / (total - w)));
}

void sgd_update(Matrix& param, const Matrix& grad, Matrix& velocity, double lr, double momentum,
                double weight_decay) {
  if (grad.size() != param.size() || velocity.size() != param.size())
    throw Error(ErrorCode::DimensionMismatch, "sgd_update: shape mismatch");
  double* p = param.data();
  double* v = velocity.data();
  const double* g = grad.data();
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double gd = g[i] + weight_decay * p[i];
    v[i] = momentum * v[i] + gd;
    p[i] -= lr * (gd + momentum * v[i]);
  }
}

void sgd_step(ModelParams& params, ModelParams& grads, ModelParams& velocity, double lr,
              const TrainConfig& cfg) {
  auto p = params.trainable();
  auto g = grads.trainable();
  auto v = velocity.trainable();
  if (p.size() != g.size() || p.size() != v.size())
    throw Error(ErrorCode::DimensionMismatch, "sgd_step: tensor lists differ");
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double wd = p[i].kind == TensorKind::Weight ? cfg.weight_decay : 0.0;
    sgd_update(*p[i].value, *g[i].value, *v[i].value, lr, cfg.momentum, wd);
  }
}

}  // namespace xfer::nn
