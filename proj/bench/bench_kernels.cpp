// OpenMP kernels against the serial reference.

#include <benchmark/benchmark.h>

#include <vector>

#include "xfer/numkit/kernels.hpp"
#include "xfer/numkit/rng.hpp"

using xfer::numkit::Matrix;
namespace numkit = xfer::numkit;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  numkit::RngStream rng(seed);
  Matrix m(rows, cols);
  for (auto& v : m.values()) v = rng.normal();
  return m;
}

std::vector<std::uint32_t> labels_for(std::size_t n, std::size_t classes) {
  std::vector<std::uint32_t> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = static_cast<std::uint32_t>(i % classes);
  return l;
}

template <Matrix (*Fn)(const Matrix&, const Matrix&)>
void pairwise(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, 64, 1);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(a, a));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

template <Matrix (*Fn)(const Matrix&, const Matrix&)>
void matmul_nt(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, 64, 2);
  const auto b = random_matrix(256, 64, 3);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(a, b));
}

template <Matrix (*Fn)(const Matrix&, const Matrix&)>
void matmul_tn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, 64, 4);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(a, a));
}

template <Matrix (*Fn)(const Matrix&, std::span<const std::uint32_t>, std::size_t)>
void centers(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, 64, 5);
  const auto labels = labels_for(n, 45);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(a, labels, 45));
}

template <std::vector<std::size_t> (*Fn)(const Matrix&, std::size_t, std::size_t)>
void knn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, 64, 6);
  for (auto _ : state)
    for (std::size_t i = 0; i < n; ++i) benchmark::DoNotOptimize(Fn(a, i, 5));
}

}  // namespace

BENCHMARK(pairwise<numkit::serial::pairwise_squared_distances>)->Name("pairwise/serial")->Arg(256)->Arg(1024);
BENCHMARK(pairwise<numkit::pairwise_squared_distances>)->Name("pairwise/omp")->Arg(256)->Arg(1024);
BENCHMARK(matmul_nt<numkit::serial::matmul_nt>)->Name("matmul_nt/serial")->Arg(1024)->Arg(4096);
BENCHMARK(matmul_nt<numkit::matmul_nt>)->Name("matmul_nt/omp")->Arg(1024)->Arg(4096);
BENCHMARK(matmul_tn<numkit::serial::matmul_tn>)->Name("matmul_tn/serial")->Arg(1024)->Arg(4096);
BENCHMARK(matmul_tn<numkit::matmul_tn>)->Name("matmul_tn/omp")->Arg(1024)->Arg(4096);
BENCHMARK(centers<numkit::serial::class_centers>)->Name("class_centers/serial")->Arg(4500);
BENCHMARK(centers<numkit::class_centers>)->Name("class_centers/omp")->Arg(4500);
BENCHMARK(knn<numkit::serial::k_nearest>)->Name("k_nearest/serial")->Arg(45)->Arg(300);
BENCHMARK(knn<numkit::k_nearest>)->Name("k_nearest/omp")->Arg(45)->Arg(300);

BENCHMARK_MAIN();
