#include "xfer/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xfer/error.hpp"
#include "xfer/numkit/kernels.hpp"

namespace xfer::metrics {

namespace {

// D_intra below this fraction of the mean squared feature norm is rounding noise.
constexpr double kDegenerateRelative = 1e-20;

std::vector<std::vector<std::size_t>> members_by_class(Labels labels, std::size_t num_classes) {
  std::vector<std::vector<std::size_t>> members(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= num_classes) throw Error(ErrorCode::OutOfRange, "label >= class count");
    members[labels[i]].push_back(i);
  }
  for (std::size_t j = 0; j < num_classes; ++j)
    if (members[j].empty()) throw Error(ErrorCode::EmptyClass, "class " + std::to_string(j) + " is empty");
  return members;
}

double sum_all(const Matrix& m) {
  double s = 0.0;
  for (double v : m.values()) s += v;
  return s;
}

double mean_squared_norm(const Matrix& features) {
  double s = 0.0;
  for (double v : features.values()) s += v * v;
  return s / static_cast<double>(std::max<std::size_t>(features.rows(), 1));
}

void require_two_classes(std::size_t num_classes) {
  if (num_classes < 2) throw Error(ErrorCode::InsufficientSamples, "at least 2 classes are required");
}

}  // namespace

std::vector<double> class_variances(const Matrix& features, Labels labels, std::size_t num_classes) {
  const Matrix centers = numkit::class_centers(features, labels, num_classes);
  std::vector<double> sums(num_classes, 0.0);
  std::vector<std::size_t> counts(num_classes, 0);
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const auto j = labels[i];
    double s = 0.0;
    for (std::size_t c = 0; c < features.cols(); ++c) {
      const double diff = features(i, c) - centers(j, c);
      s += diff * diff;
    }
    sums[j] += s;
    ++counts[j];
  }
  for (std::size_t j = 0; j < num_classes; ++j) sums[j] /= static_cast<double>(counts[j]);
  return sums;
}

double intra_class_distance(const Matrix& features, Labels labels, std::size_t num_classes) {
  const auto v = class_variances(features, labels, num_classes);
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(num_classes);
}

double inter_class_distance(const Matrix& features, Labels labels, std::size_t num_classes) {
  require_two_classes(num_classes);
  const Matrix centers = numkit::class_centers(features, labels, num_classes);
  const Matrix dist = numkit::pairwise_squared_distances(centers, centers);
  double s = 0.0;
  for (std::size_t j = 0; j < num_classes; ++j)
    for (std::size_t k = 0; k < num_classes; ++k)
      if (j != k) s += dist(j, k);
  const auto c = static_cast<double>(num_classes);
  return s / (c * (c - 1.0));
}

double discriminative_ratio(const Matrix& features, Labels labels, std::size_t num_classes) {
  const double intra = intra_class_distance(features, labels, num_classes);
  const double inter = inter_class_distance(features, labels, num_classes);
  if (intra <= kDegenerateRelative * mean_squared_norm(features)) {
    throw Error(ErrorCode::DegenerateIntra, "intra-class distance is zero");
  }
  return inter / intra;
}

double intra_pairwise(const Matrix& features, Labels labels, std::size_t num_classes) {
  const auto members = members_by_class(labels, num_classes);
  double total = 0.0;
  for (const auto& rows : members) {
    const Matrix block = features.gather_rows(rows);
    const double n = static_cast<double>(rows.size());
    total += sum_all(numkit::pairwise_squared_distances(block, block)) / (2.0 * n * n);
  }
  return total / static_cast<double>(num_classes);
}

double inter_pairwise(const Matrix& features, Labels labels, std::size_t num_classes) {
  require_two_classes(num_classes);
  const auto members = members_by_class(labels, num_classes);
  std::vector<Matrix> blocks;
  blocks.reserve(num_classes);
  for (const auto& rows : members) blocks.push_back(features.gather_rows(rows));
  double total = 0.0;
  for (std::size_t j = 0; j < num_classes; ++j)
    for (std::size_t k = 0; k < num_classes; ++k) {
      if (j == k) continue;
      const double nj = static_cast<double>(blocks[j].rows());
      const double nk = static_cast<double>(blocks[k].rows());
      total += sum_all(numkit::pairwise_squared_distances(blocks[j], blocks[k])) / (2.0 * nj * nk);
    }
  const auto c = static_cast<double>(num_classes);
  return total / (c * (c - 1.0));
}

double intra_class_distance(const FeatureSet& set) {
  return intra_class_distance(set.features(), set.labels(), set.num_classes());
}
double inter_class_distance(const FeatureSet& set) {
  return inter_class_distance(set.features(), set.labels(), set.num_classes());
}
double discriminative_ratio(const FeatureSet& set) {
  return discriminative_ratio(set.features(), set.labels(), set.num_classes());
}
double intra_pairwise(const FeatureSet& set) {
  return intra_pairwise(set.features(), set.labels(), set.num_classes());
}
double inter_pairwise(const FeatureSet& set) {
  return inter_pairwise(set.features(), set.labels(), set.num_classes());
}

std::size_t default_mixtureness_k(std::size_t num_classes) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.1 * static_cast<double>(num_classes))));
}

double feature_mixtureness(const FeatureSet& set, std::size_t k) {
  const std::size_t c = set.num_classes();
  const std::size_t c_eval = set.num_classes_in(datamodel::Domain::Eval);
  if (c_eval == 0 || c_eval == c) {
    throw Error(ErrorCode::SingleDomain, "mixtureness needs classes from both domains");
  }
  if (k < 1 || k > c - 1) {
    throw Error(ErrorCode::OutOfRange,
                "k = " + std::to_string(k) + " outside [1, " + std::to_string(c - 1) + "]");
  }
  const Matrix centers = numkit::class_centers(set.features(), set.labels(), c);
  const double uniform = static_cast<double>(c_eval) / static_cast<double>(c);
  double deviation = 0.0;
  for (std::size_t i = 0; i < c; ++i) {
    std::size_t eval_hits = 0;
    for (auto j : numkit::k_nearest(centers, i, k))
      if (set.class_domains()[j] == datamodel::Domain::Eval) ++eval_hits;
    deviation += std::abs(static_cast<double>(eval_hits) / static_cast<double>(k) - uniform);
  }
  return 1.0 - deviation / static_cast<double>(c);
}

double feature_redundancy(const Matrix& features, bool centered) {
  Matrix f = features;
  if (centered) {
    for (std::size_t c = 0; c < f.cols(); ++c) {
      double mean = 0.0;
      for (std::size_t n = 0; n < f.rows(); ++n) mean += f(n, c);
      mean /= static_cast<double>(f.rows());
      for (std::size_t n = 0; n < f.rows(); ++n) f(n, c) -= mean;
    }
  }
  const Matrix gram = numkit::matmul_tn(f, f);
  const std::size_t d = f.cols();
  std::vector<double> norms(d);
  for (std::size_t i = 0; i < d; ++i) {
    norms[i] = std::sqrt(gram(i, i));
    if (!(norms[i] > 0.0)) {
      throw Error(ErrorCode::ZeroChannel, "channel " + std::to_string(i) + " has zero norm" +
                                              (centered ? " after centering" : ""));
    }
  }
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s += std::abs(gram(i, j) / (norms[i] * norms[j]));
  return s / (static_cast<double>(d) * static_cast<double>(d));
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const auto row = logits.row(i);
    const double mx = *std::max_element(row.begin(), row.end());
    double z = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      out(i, k) = std::exp(row[k] - mx);
      z += out(i, k);
    }
    for (std::size_t k = 0; k < row.size(); ++k) out(i, k) /= z;
  }
  return out;
}

TransferProbability transfer_probability_from_probs(const Matrix& probs, Labels eval_labels,
                                                    std::size_t num_eval_classes) {
  if (eval_labels.size() != probs.rows())
    throw Error(ErrorCode::DimensionMismatch, "one label per probability row required");
  const auto members = members_by_class(eval_labels, num_eval_classes);
  TransferProbability out;
  out.pjk = numkit::class_centers(probs, eval_labels, num_eval_classes);
  out.per_class.resize(num_eval_classes);
  double total = 0.0;
  for (std::size_t j = 0; j < num_eval_classes; ++j) {
    double pj = 0.0;
    for (double v : out.pjk.row(j)) pj += v * v;
    out.per_class[j] = pj;
    total += pj;
  }
  out.p = total / static_cast<double>(num_eval_classes);
  return out;
}

TransferProbability transfer_probability(const Matrix& logits, Labels eval_labels,
                                         std::size_t num_eval_classes) {
  return transfer_probability_from_probs(softmax_rows(logits), eval_labels, num_eval_classes);
}

double psi_ratio(const FeatureSet& pre, const FeatureSet& eval) {
  const double inter_pre = inter_class_distance(pre);
  if (!(inter_pre > 0.0)) throw Error(ErrorCode::DegenerateInter, "D_inter(pre) is zero");
  return inter_class_distance(eval) / inter_pre;
}

}  // namespace xfer::metrics
