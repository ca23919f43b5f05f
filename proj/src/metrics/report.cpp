#include "xfer/metrics/report.hpp"

#include <limits>

#include <cmath>
#include <cstdio>

#include "xfer/error.hpp"
#include "xfer/metrics/metrics.hpp"

namespace xfer::metrics {

MetricsReport compute_report(const datamodel::FeatureSet& set, const MetricsOptions& opts) {
  MetricsReport r;
  auto guard = [&r](const char* field, double& slot, auto&& compute) {
    try {
      slot = compute();
    } catch (const Error& e) {
      slot = std::numeric_limits<double>::quiet_NaN();
      r.flags.push_back(std::string(field) + ":" + std::string(error_code_name(e.code())));
      if (!r.first_error) r.first_error = e.code();
    }
  };
  const auto pre = set.select_domain(datamodel::Domain::Pre);
  guard("d_inter", r.d_inter, [&] { return inter_class_distance(pre); });
  guard("d_intra", r.d_intra, [&] { return intra_class_distance(pre); });
  guard("phi", r.phi, [&] { return discriminative_ratio(pre); });
  r.k_used = opts.k == 0 ? default_mixtureness_k(set.num_classes()) : opts.k;
  guard("mixtureness", r.mixtureness, [&] { return feature_mixtureness(set, r.k_used); });
  guard("redundancy", r.redundancy, [&] { return feature_redundancy(set.features(), opts.centered); });
  return r;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json json_real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json to_json(const MetricsReport& r) {
  return {{"d_inter", json_real(r.d_inter)},         {"d_intra", json_real(r.d_intra)},
          {"phi", json_real(r.phi)},                 {"mixtureness", json_real(r.mixtureness)},
          {"redundancy", json_real(r.redundancy)},   {"k_used", r.k_used},
          {"flags", r.flags}};
}

nlohmann::json to_json(const TheoremTrace& t) {
  auto rows = nlohmann::json::array();
  for (const auto& r : t.records) {
    rows.push_back({{"epoch", r.epoch},
                    {"phi_pre", json_real(r.phi_pre)},
                    {"phi_eval", json_real(r.phi_eval)},
                    {"phi_pre_inv", json_real(r.phi_pre_inv)},
                    {"psi", json_real(r.psi)},
                    {"p", json_real(r.p)},
                    {"t", json_real(r.t_estimate)},
                    {"t_unbounded", r.t_unbounded}});
  }
  return {{"psi0", json_real(t.psi0)}, {"records", rows}};
}

std::string theorem_csv(const TheoremTrace& trace, const std::vector<MetricsReport>& reports) {
  if (reports.size() != trace.records.size())
    throw Error(ErrorCode::DimensionMismatch, "one report per trace record required");
  std::string out = "epoch,phi_pre,phi_eval,psi,p,t,mixtureness,redundancy,d_inter,d_intra\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = trace.records[i];
    const auto& m = reports[i];
    out += std::to_string(r.epoch);
    for (double v : {r.phi_pre, r.phi_eval, r.psi, r.p, r.t_estimate, m.mixtureness, m.redundancy,
                     m.d_inter, m.d_intra}) {
      out += ',';
      out += format_real(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace xfer::metrics
