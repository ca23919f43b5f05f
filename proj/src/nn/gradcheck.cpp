#include "xfer/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace xfer::nn {

namespace {

std::vector<bool> relu_pattern(const Pass& pass) {
  std::vector<bool> bits;
  for (const auto& z : pass.pre)
    for (double v : z.values()) bits.push_back(v > 0.0);
  for (double v : pass.bn_out.values()) bits.push_back(v > 0.0);
  return bits;
}

}  // namespace

GradCheckResult gradient_check(const ArchSpec& arch, const ModelParams& params, const Matrix& x,
                               Labels labels, const BnSettings& bn, double h, double floor) {
  ModelParams work = params;
  const Pass base = forward(arch, work, x, Mode::Train, bn, false);
  const auto base_pattern = relu_pattern(base);
  const ModelParams grads = backward(arch, work, base, softmax_ce(base.logits, labels).dlogits);

  ModelParams grads_copy = grads;
  auto analytic = grads_copy.trainable();
  auto tensors = work.trainable();
  GradCheckResult out;
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    auto& p = *tensors[t].value;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double orig = p.data()[i];
      p.data()[i] = orig + h;
      const Pass plus = forward(arch, work, x, Mode::Train, bn, false);
      p.data()[i] = orig - h;
      const Pass minus = forward(arch, work, x, Mode::Train, bn, false);
      p.data()[i] = orig;
      if (relu_pattern(plus) != base_pattern || relu_pattern(minus) != base_pattern) {
        ++out.skipped;
        continue;
      }
      const double numeric =
          (softmax_ce(plus.logits, labels).loss - softmax_ce(minus.logits, labels).loss) / (2.0 * h);
      const double a = analytic[t].value->data()[i];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
      out.max_abs_error = std::max(out.max_abs_error, std::abs(a - numeric));
      ++out.checked;
      if (rel > out.max_rel_error) {
        out.max_rel_error = rel;
        out.worst = tensors[t].name + "[" + std::to_string(i) + "]";
        out.worst_analytic = a;
        out.worst_numeric = numeric;
      }
    }
  }
  return out;
}

}  // namespace xfer::nn
