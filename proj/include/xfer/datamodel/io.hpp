#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "xfer/datamodel/feature_set.hpp"

namespace xfer::datamodel {

// FVEC binary layout (little-endian, no padding):
//   "FVEC0001" | u32 N | u32 d | u32 C | N*d f32 features (row-major)
//   | N u32 labels | N u8 domain flags (0 = pre, 1 = eval) | C u8 class flags
// Features are stored as float32; loading widens them back to double.

inline constexpr std::string_view kFvecMagic = "FVEC0001";

std::string encode_fvec(const FeatureSet& set);
FeatureSet decode_fvec(std::string_view bytes);
void save_fvec(const FeatureSet& set, const std::filesystem::path& path);
FeatureSet load_fvec(const std::filesystem::path& path);

// CSV: header "label,domain,f0,...,f{d-1}", one row per sample, domain is
// "pre" or "eval". Class domains are inferred from the rows. Values are
// written as the shortest decimal that round-trips their float32 rounding.

std::string format_csv(const FeatureSet& set);
FeatureSet parse_csv(std::string_view text);
void save_csv(const FeatureSet& set, const std::filesystem::path& path);
FeatureSet load_csv(const std::filesystem::path& path);

/// Picks the reader from the file extension (.csv, otherwise FVEC).
FeatureSet load_feature_set(const std::filesystem::path& path);

}  // namespace xfer::datamodel
