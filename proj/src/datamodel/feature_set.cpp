#include "xfer/datamodel/feature_set.hpp"

#include <algorithm>
#include <string>

#include "xfer/error.hpp"

namespace xfer::datamodel {

std::string_view domain_name(Domain d) { return d == Domain::Pre ? "pre" : "eval"; }

namespace {
[[noreturn]] void violation(const std::string& what) {
  throw Error(ErrorCode::InvariantViolation, what);
}
}  // namespace

FeatureSet::FeatureSet(Matrix features, std::vector<std::uint32_t> labels,
                       std::vector<Domain> domains, std::vector<Domain> class_domains)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      domains_(std::move(domains)),
      class_domains_(std::move(class_domains)) {
  if (features_.cols() < 1) violation("feature dimension must be >= 1");
  if (features_.rows() < 1) violation("feature set has no samples");
  if (labels_.size() != features_.rows() || domains_.size() != features_.rows())
    violation("labels/domains must have one entry per row");
  if (class_domains_.empty()) violation("no classes");
  for (auto cd : class_domains_)
    if (cd != Domain::Pre && cd != Domain::Eval) violation("bad class domain flag");

  std::vector<std::size_t> counts(class_domains_.size(), 0);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const auto l = labels_[i];
    if (l >= class_domains_.size())
      violation("row " + std::to_string(i) + " has label " + std::to_string(l) + " >= C");
    if (domains_[i] != Domain::Pre && domains_[i] != Domain::Eval) violation("bad domain flag");
    if (domains_[i] != class_domains_[l])
      violation("row " + std::to_string(i) + " domain disagrees with class " + std::to_string(l));
    ++counts[l];
  }
  for (std::size_t j = 0; j < counts.size(); ++j)
    if (counts[j] == 0) violation("class " + std::to_string(j) + " is empty");
  if (!features_.all_finite()) violation("non-finite feature value");
}

std::size_t FeatureSet::num_classes_in(Domain d) const noexcept {
  return static_cast<std::size_t>(std::count(class_domains_.begin(), class_domains_.end(), d));
}

FeatureSet FeatureSet::select_domain(Domain d) const {
  if (!has_domain(d)) {
    throw Error(ErrorCode::SingleDomain,
                "feature set has no " + std::string(domain_name(d)) + " classes");
  }
  constexpr auto kNone = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> remap(class_domains_.size(), kNone);
  std::uint32_t next = 0;
  for (std::size_t j = 0; j < class_domains_.size(); ++j)
    if (class_domains_[j] == d) remap[j] = next++;

  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (domains_[i] == d) rows.push_back(i);

  std::vector<std::uint32_t> labels(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) labels[i] = remap[labels_[rows[i]]];
  return FeatureSet(features_.gather_rows(rows), std::move(labels),
                    std::vector<Domain>(rows.size(), d), std::vector<Domain>(next, d));
}

FeatureSet FeatureSet::subset(std::span<const std::size_t> rows) const {
  std::vector<std::uint32_t> labels(rows.size());
  std::vector<Domain> domains(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= labels_.size()) throw Error(ErrorCode::OutOfRange, "subset row out of range");
    labels[i] = labels_[rows[i]];
    domains[i] = domains_[rows[i]];
  }
  return FeatureSet(features_.gather_rows(rows), std::move(labels), std::move(domains),
                    class_domains_);
}

FeatureSet FeatureSet::with_features(Matrix features) const {
  if (features.rows() != features_.rows())
    throw Error(ErrorCode::DimensionMismatch, "replacement features have a different row count");
  return FeatureSet(std::move(features), labels_, domains_, class_domains_);
}

}  // namespace xfer::datamodel
