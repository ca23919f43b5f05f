#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "xfer/datamodel/split.hpp"
#include "xfer/eval/probe.hpp"
#include "xfer/metrics/report.hpp"

namespace xfer::eval {

struct TraceOptions {
  std::size_t k = 0;  ///< 0: default_mixtureness_k(C)
  bool centered = false;
  ProbeConfig probe;
  datamodel::SplitSpec eval_split = datamodel::SplitSpec::fraction(0.5, 0);
  bool run_probe = true;
};

/// One checkpoint. Metrics that fail are NaN and named in `flags`
/// ("field:ErrorName"); an unbounded t is +inf with flag "t:unbounded".
struct TraceRow {
  std::uint32_t epoch = 0;
  double phi_pre = 0.0, phi_eval = 0.0, psi = 0.0, p = 0.0, t = 0.0;
  double mixtureness = 0.0, redundancy = 0.0, d_inter_pre = 0.0, d_intra_pre = 0.0;
  double probe_top1 = 0.0;
  std::vector<std::string> flags;
};

struct TraceResult {
  std::vector<TraceRow> rows;
  metrics::TheoremTrace theorem;
  std::vector<metrics::MetricsReport> reports;
  std::vector<ProbeResult> probes;
};

/// Per checkpoint of `run_dir`: final-stage features of `data` (both
/// domains), phi on each domain, Pi over all classes, R over pre-D features,
/// psi, P from the checkpoint's own head on eval-D rows, an eval-D probe
/// (split by opts.eval_split), then t across the trajectory.
TraceResult trace(const std::filesystem::path& run_dir, const datamodel::FeatureSet& data,
                  const TraceOptions& opts);

inline constexpr const char* kTraceColumns =
    "epoch,phi_pre,phi_eval,psi,p,t,mixtureness,redundancy,d_inter_pre,d_intra_pre,probe_top1,flags";

std::string trace_csv(const std::vector<TraceRow>& rows);
nlohmann::json trace_json(const std::vector<TraceRow>& rows);
/// Inverse of trace_csv; throws MalformedTrace.
std::vector<TraceRow> parse_trace_csv(std::string_view text);

}  // namespace xfer::eval
