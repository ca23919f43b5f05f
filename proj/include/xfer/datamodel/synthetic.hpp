#pragma once

#include <cstdint>
#include <vector>

#include "xfer/datamodel/feature_set.hpp"

namespace xfer::datamodel {

/// Two-domain Gaussian class mixture.
///
/// Pre-D class centers are N(0, center_sigma^2 I); eval-D centers follow the
/// same law shifted by `gap` along shift_direction(dim). Samples are
/// N(center, within_sigma^2 I). Labels: pre classes 0..c_pre-1, then eval
/// classes c_pre..c_pre+c_eval-1, each block of samples_per_class rows.
struct SyntheticConfig {
  std::size_t c_pre = 30;
  std::size_t c_eval = 15;
  std::size_t dim = 64;
  std::size_t samples_per_class = 100;
  double gap = 0.0;
  double within_sigma = 1.0;
  double center_sigma = 3.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// The fixed unit vector (1, ..., 1) / sqrt(dim).
std::vector<double> shift_direction(std::size_t dim);

FeatureSet generate_synthetic(const SyntheticConfig& cfg);

}  // namespace xfer::datamodel
