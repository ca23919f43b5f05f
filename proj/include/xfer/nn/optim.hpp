#pragma once

#include "xfer/nn/arch.hpp"

namespace xfer::nn {

/// Learning rate at epoch position t in [0, epochs]: linear warmup from
/// warmup_start_lr to base_lr over warmup_epochs, then
/// 0.5 * base_lr * (1 + cos(pi * (t - w) / (T - w))).
double lr_at(const TrainConfig& cfg, double t);

/// Nesterov step on one tensor:
///   g' = g + wd * p;  v <- m * v + g';  p <- p - lr * (g' + m * v)
void sgd_update(Matrix& param, const Matrix& grad, Matrix& velocity, double lr, double momentum,
                double weight_decay);

/// sgd_update over every trainable tensor; weight decay reaches weights only
/// (not biases, not BN scale/shift).
void sgd_step(ModelParams& params, ModelParams& grads, ModelParams& velocity, double lr,
              const TrainConfig& cfg);

}  // namespace xfer::nn
