#include "xfer/numkit/kernels.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "xfer/error.hpp"

namespace xfer::numkit {

namespace {

using Index = std::ptrdiff_t;

void require_same_cols(const Matrix& a, const Matrix& b, const char* op) {
  if (a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(op) + ": column counts differ (" +
                                                  std::to_string(a.cols()) + " vs " +
                                                  std::to_string(b.cols()) + ")");
  }
}

void check_k_nearest(const Matrix& points, std::size_t query_index, std::size_t k) {
  if (query_index >= points.rows()) throw Error(ErrorCode::OutOfRange, "query index out of range");
  if (k < 1 || k + 1 > points.rows()) {
    throw Error(ErrorCode::OutOfRange, "k = " + std::to_string(k) + " outside [1, " +
                                           std::to_string(points.rows() - 1) + "]");
  }
}

std::vector<std::size_t> select_nearest(const std::vector<double>& dist, std::size_t query_index,
                                        std::size_t k) {
  std::vector<std::size_t> idx;
  idx.reserve(dist.size() - 1);
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (i != query_index) idx.push_back(i);
  auto closer = [&](std::size_t x, std::size_t y) {
    return dist[x] < dist[y] || (dist[x] == dist[y] && x < y);
  };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<Index>(k), idx.end(), closer);
  idx.resize(k);
  return idx;
}

std::vector<std::size_t> class_counts(std::span<const std::uint32_t> labels, std::size_t rows,
                                      std::size_t num_classes) {
  if (labels.size() != rows) {
    throw Error(ErrorCode::DimensionMismatch, "label count " + std::to_string(labels.size()) +
                                                  " != row count " + std::to_string(rows));
  }
  std::vector<std::size_t> counts(num_classes, 0);
  for (auto l : labels) {
    if (l >= num_classes) {
      throw Error(ErrorCode::OutOfRange, "label " + std::to_string(l) + " >= class count " +
                                             std::to_string(num_classes));
    }
    ++counts[l];
  }
  for (std::size_t j = 0; j < num_classes; ++j)
    if (counts[j] == 0) throw Error(ErrorCode::EmptyClass, "class " + std::to_string(j) + " is empty");
  return counts;
}

void check_matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matmul: inner dimensions differ");
}
void check_matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matmul_tn: row counts differ");
}

// out += a_row * b, accumulated over the rows of b in ascending order.
inline void axpy_rows(const double* a_row, const Matrix& b, double* out) {
  const std::size_t k = b.rows();
  const std::size_t m = b.cols();
  const double* bp = b.data();
  for (std::size_t kk = 0; kk < k; ++kk) {
    const double s = a_row[kk];
    const double* brow = bp + kk * m;
    for (std::size_t j = 0; j < m; ++j) out[j] += s * brow[j];
  }
}

}  // namespace

Matrix pairwise_squared_distances(const Matrix& a, const Matrix& b) {
  require_same_cols(a, b, "pairwise_squared_distances");
  Matrix out(a.rows(), b.rows());
  const std::size_t d = a.cols();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < static_cast<Index>(a.rows()); ++i) {
    const double* ai = a.data() + static_cast<std::size_t>(i) * d;
    double* oi = out.data() + static_cast<std::size_t>(i) * b.rows();
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const double* bj = b.data() + j * d;
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = ai[c] - bj[c];
        s += diff * diff;
      }
      oi[j] = s;
    }
  }
  return out;
}

std::vector<std::size_t> k_nearest(const Matrix& points, std::size_t query_index, std::size_t k) {
  check_k_nearest(points, query_index, k);
  const std::size_t d = points.cols();
  const double* q = points.data() + query_index * d;
  std::vector<double> dist(points.rows());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < static_cast<Index>(points.rows()); ++i) {
    const double* p = points.data() + static_cast<std::size_t>(i) * d;
    double s = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      const double diff = p[c] - q[c];
      s += diff * diff;
    }
    dist[static_cast<std::size_t>(i)] = s;
  }
  return select_nearest(dist, query_index, k);
}

Matrix class_centers(const Matrix& features, std::span<const std::uint32_t> labels,
                     std::size_t num_classes) {
  const auto counts = class_counts(labels, features.rows(), num_classes);
  std::vector<std::vector<std::size_t>> members(num_classes);
  for (std::size_t j = 0; j < num_classes; ++j) members[j].reserve(counts[j]);
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);

  const std::size_t d = features.cols();
  Matrix out(num_classes, d);
#pragma omp parallel for schedule(dynamic)
  for (Index j = 0; j < static_cast<Index>(num_classes); ++j) {
    double* oj = out.data() + static_cast<std::size_t>(j) * d;
    for (std::size_t i : members[static_cast<std::size_t>(j)]) {
      const double* fi = features.data() + i * d;
      for (std::size_t c = 0; c < d; ++c) oj[c] += fi[c];
    }
    const auto n = static_cast<double>(counts[static_cast<std::size_t>(j)]);
    for (std::size_t c = 0; c < d; ++c) oj[c] /= n;
  }
  return out;
}

Matrix class_centers(const Matrix& features, std::span<const std::uint32_t> labels) {
  std::size_t c = 0;
  for (auto l : labels) c = std::max<std::size_t>(c, std::size_t{l} + 1);
  return class_centers(features, labels, c);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  check_matmul(a, b);
  Matrix out(a.rows(), b.cols());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < static_cast<Index>(a.rows()); ++i) {
    const auto r = static_cast<std::size_t>(i);
    axpy_rows(a.data() + r * a.cols(), b, out.data() + r * b.cols());
  }
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  require_same_cols(a, b, "matmul_nt");
  return matmul(a, b.transposed());
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  check_matmul_tn(a, b);
  const std::size_t n = a.rows();
  const std::size_t k = a.cols();
  const std::size_t m = b.cols();
  Matrix out(k, m);
#pragma omp parallel for schedule(static)
  for (Index p = 0; p < static_cast<Index>(k); ++p) {
    const auto pp = static_cast<std::size_t>(p);
    double* op = out.data() + pp * m;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = a(i, pp);
      const double* bi = b.data() + i * m;
      for (std::size_t j = 0; j < m; ++j) op[j] += s * bi[j];
    }
  }
  return out;
}

namespace serial {

Matrix pairwise_squared_distances(const Matrix& a, const Matrix& b) {
  require_same_cols(a, b, "pairwise_squared_distances");
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < a.cols(); ++c) {
        const double diff = a(i, c) - b(j, c);
        s += diff * diff;
      }
      out(i, j) = s;
    }
  return out;
}

std::vector<std::size_t> k_nearest(const Matrix& points, std::size_t query_index, std::size_t k) {
  check_k_nearest(points, query_index, k);
  std::vector<double> dist(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    double s = 0.0;
    for (std::size_t c = 0; c < points.cols(); ++c) {
      const double diff = points(i, c) - points(query_index, c);
      s += diff * diff;
    }
    dist[i] = s;
  }
  return select_nearest(dist, query_index, k);
}

Matrix class_centers(const Matrix& features, std::span<const std::uint32_t> labels,
                     std::size_t num_classes) {
  const auto counts = class_counts(labels, features.rows(), num_classes);
  Matrix out(num_classes, features.cols());
  for (std::size_t i = 0; i < features.rows(); ++i)
    for (std::size_t c = 0; c < features.cols(); ++c) out(labels[i], c) += features(i, c);
  for (std::size_t j = 0; j < num_classes; ++j)
    for (std::size_t c = 0; c < features.cols(); ++c) out(j, c) /= static_cast<double>(counts[j]);
  return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  check_matmul(a, b);
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  require_same_cols(a, b, "matmul_nt");
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(j, k);
      out(i, j) = s;
    }
  return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  check_matmul_tn(a, b);
  Matrix out(a.cols(), b.cols());
  for (std::size_t p = 0; p < a.cols(); ++p)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, p) * b(i, j);
      out(p, j) = s;
    }
  return out;
}

}  // namespace serial

}  // namespace xfer::numkit
