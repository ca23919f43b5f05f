#pragma once

#include <string>

#include "xfer/nn/model.hpp"

namespace xfer::nn {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  ///< coordinates whose probe crossed a ReLU kink
  std::string worst;        ///< "tensor[index]" of the largest error
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  double max_abs_error = 0.0;
};

/// Compares backward() with central differences of the Train-mode loss,
/// coordinate by coordinate: rel = |a - n| / max(|a|, |n|, floor). The floor
/// keeps coordinates whose exact gradient is zero (e.g. fc1 bias under batch
/// statistics) from dividing rounding noise by rounding noise.
GradCheckResult gradient_check(const ArchSpec& arch, const ModelParams& params, const Matrix& x,
                               Labels labels, const BnSettings& bn, double h = 1e-5,
                               double floor = 1e-4);

}  // namespace xfer::nn
