#pragma once

// Representation metrics over labelled features.
//
// Distances are squared Euclidean. Class-level quantities use the class
// centers mu_j (mean feature of class j):
//   D_inter = 1/(C(C-1)) * sum_{j != k} ||mu_j - mu_k||^2   (ordered pairs)
//   D_intra = 1/C * sum_j 1/|I_j| * sum_{i in I_j} ||f_i - mu_j||^2
//   phi     = D_inter / D_intra
// The pairwise forms average ||f_i - f_l||^2 / 2 over sample pairs instead of
// going through the centers; the intra form equals D_intra exactly, the inter
// form equals D_inter / 2 plus the mean of (V_j + V_k) / 2 over ordered pairs,
// with V the per-class biased variance.

#include <cstdint>
#include <span>
#include <vector>

#include "xfer/datamodel/feature_set.hpp"
#include "xfer/numkit/matrix.hpp"

namespace xfer::metrics {

using datamodel::FeatureSet;
using numkit::Matrix;
using Labels = std::span<const std::uint32_t>;

double intra_class_distance(const Matrix& features, Labels labels, std::size_t num_classes);
double inter_class_distance(const Matrix& features, Labels labels, std::size_t num_classes);
/// Throws DegenerateIntra when D_intra vanishes at rounding level.
double discriminative_ratio(const Matrix& features, Labels labels, std::size_t num_classes);

double intra_pairwise(const Matrix& features, Labels labels, std::size_t num_classes);
double inter_pairwise(const Matrix& features, Labels labels, std::size_t num_classes);

/// V_j = 1/|I_j| * sum_{i in I_j} ||f_i - mu_j||^2
std::vector<double> class_variances(const Matrix& features, Labels labels, std::size_t num_classes);

double intra_class_distance(const FeatureSet& set);
double inter_class_distance(const FeatureSet& set);
double discriminative_ratio(const FeatureSet& set);
double intra_pairwise(const FeatureSet& set);
double inter_pairwise(const FeatureSet& set);

/// Default neighbour count: max(1, round(0.1 * C)).
std::size_t default_mixtureness_k(std::size_t num_classes);

/// Feature Mixtureness over class centers:
///   Pi = 1 - 1/C * sum_i | top_k^eval(i) / k - C_eval / C |
/// where top_k^eval(i) counts eval-D classes among the k centers nearest to
/// class i's center.
double feature_mixtureness(const FeatureSet& set, std::size_t k);

/// Channel redundancy R = 1/d^2 * sum_{i,j} |rho(i, j)| with
/// rho(i, j) = <f_.i, f_.j> / (||f_.i|| ||f_.j||) (uncentered). With
/// `centered`, columns are mean-centered first (Pearson correlation).
double feature_redundancy(const Matrix& features, bool centered = false);

struct TransferProbability {
  double p = 0.0;                ///< mean of per_class
  std::vector<double> per_class; ///< P_j = sum_k P_jk^2
  Matrix pjk;                    ///< C_eval x C_pre mean class-assignment probabilities
};

/// P from per-sample class-probability rows (each row sums to 1).
TransferProbability transfer_probability_from_probs(const Matrix& probs, Labels eval_labels,
                                                    std::size_t num_eval_classes);
/// P from classifier logits; rows are softmax-normalized first.
TransferProbability transfer_probability(const Matrix& logits, Labels eval_labels,
                                         std::size_t num_eval_classes);

/// psi = D_inter(eval) / D_inter(pre). Throws DegenerateInter if D_inter(pre) = 0.
double psi_ratio(const FeatureSet& pre, const FeatureSet& eval);

Matrix softmax_rows(const Matrix& logits);

}  // namespace xfer::metrics
