#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "xfer/error.hpp"

namespace xfer::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Runs one subcommand (args exclude the program name). Returns the exit
/// code: 0 success, 1 usage, 2 data error, 3 numeric failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int exit_code(ErrorCategory category) noexcept;

/// Paper fixture block plus one measured series per (label, trace CSV).
nlohmann::json build_report(const std::vector<std::pair<std::string, std::filesystem::path>>& traces);

}  // namespace xfer::cli
