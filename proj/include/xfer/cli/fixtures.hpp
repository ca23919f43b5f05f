#pragma once

#include <cstdint>
#include <string_view>

namespace xfer::cli {

/// Reference values transcribed from the paper, as bundled JSON text. Every
/// row carries "source": "paper".
std::string_view paper_fixture_json();

/// FNV-1a, 64-bit.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Hash of paper_fixture_json(), fixed when the fixture was transcribed.
inline constexpr std::uint64_t kPaperFixtureHash = 0xc6a7c0608b10cc45ULL;

}  // namespace xfer::cli
