#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "xfer/numkit/matrix.hpp"

namespace xfer::datamodel {

using numkit::Matrix;

enum class Domain : std::uint8_t { Pre = 0, Eval = 1 };

std::string_view domain_name(Domain d);

/// Labelled features split into pretraining (pre-D) and evaluation (eval-D)
/// classes. Immutable once built; the constructor enforces every invariant:
/// d >= 1, labels dense in [0, C), each sample's domain equals its class's
/// domain, no empty class, finite features.
class FeatureSet {
 public:
  FeatureSet(Matrix features, std::vector<std::uint32_t> labels, std::vector<Domain> domains,
             std::vector<Domain> class_domains);

  const Matrix& features() const noexcept { return features_; }
  std::span<const std::uint32_t> labels() const noexcept { return labels_; }
  std::span<const Domain> domains() const noexcept { return domains_; }
  std::span<const Domain> class_domains() const noexcept { return class_domains_; }

  std::size_t num_samples() const noexcept { return features_.rows(); }
  std::size_t dim() const noexcept { return features_.cols(); }
  std::size_t num_classes() const noexcept { return class_domains_.size(); }
  std::size_t num_classes_in(Domain d) const noexcept;
  bool has_domain(Domain d) const noexcept { return num_classes_in(d) > 0; }

  /// Rows of one domain with labels renumbered 0..C_d-1 in ascending original order.
  FeatureSet select_domain(Domain d) const;
  /// Rows in the given order; labels and class domains are kept.
  FeatureSet subset(std::span<const std::size_t> rows) const;
  /// Same labels and domains over a new feature matrix with equal row count.
  FeatureSet with_features(Matrix features) const;

 private:
  Matrix features_;
  std::vector<std::uint32_t> labels_;
  std::vector<Domain> domains_;
  std::vector<Domain> class_domains_;
};

}  // namespace xfer::datamodel
