#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace xfer::numkit {

/// Counter-based SplitMix64 stream.
///
/// Draw i (0-based) is mix64(seed + (i + 1) * 0x9E3779B97F4A7C15), where mix64 is
/// the SplitMix64 finalizer. The full state is (seed, counter), so a stream can
/// be checkpointed and restored exactly. Normals use Box-Muller on two uniform
/// draws (cosine branch only); no platform distribution objects are involved.
class RngStream {
 public:
  struct State {
    std::uint64_t seed = 0;
    std::uint64_t counter = 0;
    friend bool operator==(const State&, const State&) = default;
  };

  explicit RngStream(std::uint64_t seed = 0) : state_{seed, 0} {}
  explicit RngStream(State s) : state_(s) {}

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  double normal() noexcept;
  double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }
  /// Uniform integer in [0, n); n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n) noexcept;

  template <class T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      std::swap(items[i - 1], items[j]);
    }
  }
  template <class T>
  void shuffle(std::vector<T>& items) noexcept {
    shuffle(std::span<T>(items));
  }

  /// Independent child stream keyed by `stream_id`; does not advance this stream.
  RngStream fork(std::uint64_t stream_id) const noexcept;

  State state() const noexcept { return state_; }

 private:
  State state_;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace xfer::numkit
