#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "xfer/datamodel/feature_set.hpp"
#include "xfer/error.hpp"
#include "xfer/metrics/theorem.hpp"

namespace xfer::metrics {

struct MetricsOptions {
  std::size_t k = 0;  ///< 0 selects default_mixtureness_k(C)
  bool centered = false;
};

/// phi, D_inter and D_intra are taken over the pre-D rows, Pi over all classes,
/// R over all rows. A metric that raises is NaN and named in `flags`
/// ("field:ErrorName"); `first_error` keeps the first such code.
struct MetricsReport {
  double d_inter = 0.0;
  double d_intra = 0.0;
  double phi = 0.0;
  double mixtureness = 0.0;
  double redundancy = 0.0;
  std::size_t k_used = 0;
  std::vector<std::string> flags;
  std::optional<ErrorCode> first_error;
};

MetricsReport compute_report(const datamodel::FeatureSet& set, const MetricsOptions& opts = {});

/// Shortest exact text for a double ("%.17g"); inf and nan are spelled out.
std::string format_real(double v);
/// Finite values as numbers, non-finite values as null.
nlohmann::json json_real(double v);

nlohmann::json to_json(const MetricsReport& r);
nlohmann::json to_json(const TheoremTrace& t);

/// One row per checkpoint: epoch, phi_pre, phi_eval, psi, p, t, mixtureness,
/// redundancy, d_inter, d_intra. `reports` runs parallel to `trace.records`.
std::string theorem_csv(const TheoremTrace& trace, const std::vector<MetricsReport>& reports);

}  // namespace xfer::metrics
