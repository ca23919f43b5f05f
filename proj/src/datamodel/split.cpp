#include "xfer/datamodel/split.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xfer/error.hpp"
#include "xfer/numkit/rng.hpp"

namespace xfer::datamodel {

namespace {

void check_parts(const FeatureSet& set, const std::vector<std::size_t>& train,
                 const std::vector<std::size_t>& test) {
  if (train.empty() || test.empty()) {
    throw Error(ErrorCode::EmptyPart, std::string(train.empty() ? "train" : "test") + " part is empty");
  }
  std::vector<std::size_t> in_train(set.num_classes(), 0);
  std::vector<std::size_t> in_test(set.num_classes(), 0);
  for (auto r : train) ++in_train[set.labels()[r]];
  for (auto r : test) ++in_test[set.labels()[r]];
  for (std::size_t j = 0; j < set.num_classes(); ++j) {
    if (in_train[j] == 0 || in_test[j] == 0) {
      throw Error(ErrorCode::InsufficientSamples,
                  "class " + std::to_string(j) + " would be missing from the " +
                      (in_train[j] == 0 ? "train" : "test") + " part");
    }
  }
}

}  // namespace

std::pair<FeatureSet, FeatureSet> split(const FeatureSet& set, const SplitSpec& spec) {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;

  if (spec.train_fraction) {
    const double f = *spec.train_fraction;
    if (!(f >= 0.0 && f <= 1.0)) throw Error(ErrorCode::InvalidConfig, "train fraction outside [0, 1]");
    std::vector<std::vector<std::size_t>> members(set.num_classes());
    for (std::size_t i = 0; i < set.num_samples(); ++i) members[set.labels()[i]].push_back(i);
    numkit::RngStream rng(spec.seed);
    for (auto& rows : members) {
      rng.shuffle(rows);
      const auto n_train = static_cast<std::size_t>(std::llround(f * static_cast<double>(rows.size())));
      train.insert(train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_train));
      test.insert(test.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_train), rows.end());
    }
  } else {
    train = spec.train_rows;
    test = spec.test_rows;
    std::vector<int> seen(set.num_samples(), 0);
    for (auto* part : {&train, &test})
      for (auto r : *part) {
        if (r >= set.num_samples()) throw Error(ErrorCode::OutOfRange, "split row out of range");
        if (seen[r]++) throw Error(ErrorCode::InvalidConfig, "split row " + std::to_string(r) + " listed twice");
      }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
      throw Error(ErrorCode::InvalidConfig, "explicit split does not cover every row");
  }

  check_parts(set, train, test);
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {set.subset(train), set.subset(test)};
}

}  // namespace xfer::datamodel
