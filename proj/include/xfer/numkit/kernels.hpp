#pragma once

// Dense kernels used by every other module.
//
// Each kernel has an OpenMP implementation in xfer::numkit and a plain
// reference implementation in xfer::numkit::serial. Both accumulate every
// output element in the same (index-ascending) order, so for a fixed build
// their results are bit-identical; the tests check exactly that.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "xfer/numkit/matrix.hpp"

namespace xfer::numkit {

/// out(i, j) = sum_c (a(i, c) - b(j, c))^2.
Matrix pairwise_squared_distances(const Matrix& a, const Matrix& b);

/// The k points nearest to row `query_index` (itself excluded), ordered by
/// ascending squared distance with ties broken by ascending index.
std::vector<std::size_t> k_nearest(const Matrix& points, std::size_t query_index, std::size_t k);

/// Row j is the mean of the rows labelled j. Every class in [0, num_classes)
/// must occur at least once.
Matrix class_centers(const Matrix& features, std::span<const std::uint32_t> labels,
                     std::size_t num_classes);
Matrix class_centers(const Matrix& features, std::span<const std::uint32_t> labels);

/// a (n x k) * b (k x m)
Matrix matmul(const Matrix& a, const Matrix& b);
/// a (n x k) * b^T, b is (m x k)
Matrix matmul_nt(const Matrix& a, const Matrix& b);
/// a^T * b, a is (n x k), b is (n x m)
Matrix matmul_tn(const Matrix& a, const Matrix& b);

namespace serial {

Matrix pairwise_squared_distances(const Matrix& a, const Matrix& b);
std::vector<std::size_t> k_nearest(const Matrix& points, std::size_t query_index, std::size_t k);
Matrix class_centers(const Matrix& features, std::span<const std::uint32_t> labels,
                     std::size_t num_classes);
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_nt(const Matrix& a, const Matrix& b);
Matrix matmul_tn(const Matrix& a, const Matrix& b);

}  // namespace serial

}  // namespace xfer::numkit
