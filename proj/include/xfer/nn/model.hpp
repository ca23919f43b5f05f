#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xfer/nn/arch.hpp"

namespace xfer::nn {

using Labels = std::span<const std::uint32_t>;

enum class Mode { Train, Eval };

struct BnSettings {
  double epsilon = 1e-5;
  double momentum = 0.1;
};

/// Everything backward() needs from one forward pass.
struct Pass {
  Mode mode = Mode::Eval;
  std::vector<Matrix> pre;   ///< z_s, one per encoder stage
  std::vector<Matrix> acts;  ///< acts[0] is the input, acts[s] = relu(z_s)
  Matrix fc1_out, xhat, bn_out, relu_out, proj_out;
  Matrix bn_inv_std;         ///< 1 x hidden
  Matrix head_in;
  Matrix head_unit, proto_unit;       ///< cosine head only
  std::vector<double> head_norms, proto_norms;
  Matrix logits;
};

/// Activations after each encoder stage (stage 1 first); the last one is the
/// transfer feature f.
std::vector<Matrix> forward_encoder(const ModelParams& params, const Matrix& x);

/// g(f) = fc2(ReLU(BN(fc1(f)))). Train mode normalizes with batch statistics
/// and moves the running statistics by `bn.momentum` (unbiased variance);
/// Eval mode uses the running statistics.
Matrix forward_projector(ModelParams& params, const Matrix& features, Mode mode, const BnSettings& bn);

Pass forward(const ArchSpec& arch, ModelParams& params, const Matrix& x, Mode mode,
             const BnSettings& bn, bool update_running = true);

/// beta * cos(w_j, f) for every row of `features` and every prototype row.
Matrix cosine_logits(const Matrix& features, const Matrix& prototypes, double beta);

/// Mean cross-entropy and its gradient w.r.t. the logits (already divided by
/// the batch size). A non-finite loss is returned as is.
struct LossGrad {
  double loss = 0.0;
  Matrix dlogits;
};
LossGrad softmax_ce(const Matrix& logits, Labels labels);

double softmax_ce_loss(const Matrix& logits, Labels labels);
double cosine_softmax_loss(const Matrix& features, const Matrix& prototypes, Labels labels,
                           double beta = 30.0);

/// Gradients of the loss behind `dlogits` for every trainable tensor.
ModelParams backward(const ArchSpec& arch, const ModelParams& params, const Pass& pass,
                     const Matrix& dlogits);

/// Row-wise argmax, ties to the lowest index.
std::vector<std::uint32_t> argmax_rows(const Matrix& m);

}  // namespace xfer::nn
