#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "xfer/datamodel/feature_set.hpp"

namespace xfer::datamodel {

/// Train/test partition of a FeatureSet: either a stratified train fraction
/// drawn with `seed`, or explicit row lists.
struct SplitSpec {
  std::optional<double> train_fraction;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  std::uint64_t seed = 0;

  static SplitSpec fraction(double train_fraction, std::uint64_t seed) {
    SplitSpec s;
    s.train_fraction = train_fraction;
    s.seed = seed;
    return s;
  }
  static SplitSpec explicit_rows(std::vector<std::size_t> train, std::vector<std::size_t> test) {
    SplitSpec s;
    s.train_rows = std::move(train);
    s.test_rows = std::move(test);
    return s;
  }
};

/// Per class, round(train_fraction * n_c) rows go to train and the rest to
/// test. Both parts keep every class; rows stay in ascending original order.
std::pair<FeatureSet, FeatureSet> split(const FeatureSet& set, const SplitSpec& spec);

}  // namespace xfer::datamodel
