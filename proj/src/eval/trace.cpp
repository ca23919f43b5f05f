#include "xfer/eval/trace.hpp"

#include <charconv>
#include <cmath>
#include <exception>
#include <limits>

#include "xfer/error.hpp"
#include "xfer/metrics/metrics.hpp"
#include "xfer/nn/model.hpp"

namespace xfer::eval {

using datamodel::Domain;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class F>
void guarded(TraceRow& row, const char* field, double& slot, F&& compute) {
  try {
    slot = compute();
  } catch (const Error& e) {
    slot = kNaN;
    row.flags.push_back(std::string(field) + ":" + std::string(error_code_name(e.code())));
  }
}

struct Slot {
  TraceRow row;
  metrics::MetricsReport report;
  ProbeResult probe;
  std::exception_ptr error;
};

void trace_checkpoint(const std::filesystem::path& path, const FeatureSet& data, const TraceOptions& opts,
                      Slot& out) {
  const auto ckpt = nn::load_checkpoint(path);
  auto& row = out.row;
  row.epoch = ckpt.epoch;
  const FeatureSet feats = extract_features(ckpt, data, ckpt.arch.stages());
  const FeatureSet pre = feats.select_domain(Domain::Pre);
  const FeatureSet ev = feats.select_domain(Domain::Eval);

  guarded(row, "phi_pre", row.phi_pre, [&] { return metrics::discriminative_ratio(pre); });
  guarded(row, "phi_eval", row.phi_eval, [&] { return metrics::discriminative_ratio(ev); });
  guarded(row, "d_inter_pre", row.d_inter_pre, [&] { return metrics::inter_class_distance(pre); });
  guarded(row, "d_intra_pre", row.d_intra_pre, [&] { return metrics::intra_class_distance(pre); });
  const std::size_t k = opts.k ? opts.k : metrics::default_mixtureness_k(feats.num_classes());
  guarded(row, "mixtureness", row.mixtureness, [&] { return metrics::feature_mixtureness(feats, k); });
  guarded(row, "redundancy", row.redundancy,
          [&] { return metrics::feature_redundancy(pre.features(), opts.centered); });
  guarded(row, "psi", row.psi, [&] { return metrics::psi_ratio(pre, ev); });
  guarded(row, "p", row.p, [&] {
    const FeatureSet raw_eval = data.select_domain(Domain::Eval);
    nn::ModelParams params = ckpt.params;
    const auto pass = nn::forward(ckpt.arch, params, raw_eval.features(), nn::Mode::Eval,
                                  {ckpt.config.bn_epsilon, ckpt.config.bn_momentum});
    return metrics::transfer_probability(pass.logits, raw_eval.labels(), raw_eval.num_classes()).p;
  });
  out.report.d_inter = row.d_inter_pre;
  out.report.d_intra = row.d_intra_pre;
  out.report.phi = row.phi_pre;
  out.report.mixtureness = row.mixtureness;
  out.report.redundancy = row.redundancy;
  out.report.k_used = k;
  out.report.flags = row.flags;

  row.probe_top1 = kNaN;
  if (opts.run_probe) {
    const auto [tr, te] = datamodel::split(ev, opts.eval_split);
    out.probe = linear_probe(tr, te, opts.probe);
    row.probe_top1 = out.probe.best_top1;
    for (std::size_t i = 0; i < out.probe.diverged.size(); ++i)
      if (out.probe.diverged[i]) row.flags.push_back("probe:diverged@" + metrics::format_real(out.probe.lrs[i]));
  }
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_real(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::MalformedTrace, "line " + std::to_string(line) + ": '" + std::string(s) + "' is not a number");
  return v;
}

}  // namespace

TraceResult trace(const std::filesystem::path& run_dir, const FeatureSet& data, const TraceOptions& opts) {
  const auto paths = nn::list_checkpoints(run_dir);
  if (paths.size() < 3) {
    throw Error(ErrorCode::MissingCheckpoint, "trace needs >= 3 checkpoints in '" + run_dir.string() +
                                                  "', found " + std::to_string(paths.size()));
  }
  if (!data.has_domain(Domain::Pre) || !data.has_domain(Domain::Eval))
    throw Error(ErrorCode::SingleDomain, "trace needs pre-D and eval-D rows");
  if (opts.run_probe) opts.probe.validate();

  std::vector<Slot> slots(paths.size());
  const auto count = static_cast<std::ptrdiff_t>(paths.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      trace_checkpoint(paths[static_cast<std::size_t>(i)], data, opts, slots[static_cast<std::size_t>(i)]);
    } catch (...) {
      slots[static_cast<std::size_t>(i)].error = std::current_exception();
    }
  }

  TraceResult out;
  for (auto& s : slots) {
    if (s.error) std::rethrow_exception(s.error);
    metrics::TheoremRecord rec;
    rec.epoch = s.row.epoch;
    rec.phi_pre = s.row.phi_pre;
    rec.phi_eval = s.row.phi_eval;
    rec.phi_pre_inv = 1.0 / s.row.phi_pre;
    rec.psi = s.row.psi;
    rec.p = s.row.p;
    out.theorem.records.push_back(rec);
    out.rows.push_back(std::move(s.row));
    out.reports.push_back(s.report);
    out.probes.push_back(std::move(s.probe));
  }

  // t is fitted over the checkpoints whose inputs are usable.
  metrics::TheoremTrace usable;
  std::vector<std::size_t> where;
  for (std::size_t i = 0; i < out.theorem.records.size(); ++i) {
    const auto& r = out.theorem.records[i];
    if (std::isfinite(r.psi) && r.psi > 0.0 && std::isfinite(r.phi_pre_inv) && r.p > 0.0 && r.p <= 1.0) {
      usable.records.push_back(r);
      where.push_back(i);
    }
  }
  for (auto& row : out.rows) row.t = kNaN;
  if (usable.records.size() >= 3) {
    metrics::estimate_threshold(usable);
    out.theorem.psi0 = usable.psi0;
    for (std::size_t j = 0; j < where.size(); ++j) {
      out.theorem.records[where[j]] = usable.records[j];
      out.rows[where[j]].t = usable.records[j].t_estimate;
      if (usable.records[j].t_unbounded) out.rows[where[j]].flags.push_back("t:unbounded");
    }
  } else {
    out.theorem.psi0 = kNaN;
    for (auto& row : out.rows) row.flags.push_back("t:TooFewCheckpoints");
  }
  return out;
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
  std::string out = std::string(kTraceColumns) + "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.epoch);
    for (double v : {r.phi_pre, r.phi_eval, r.psi, r.p, r.t, r.mixtureness, r.redundancy, r.d_inter_pre,
                     r.d_intra_pre, r.probe_top1}) {
      out += ',';
      out += metrics::format_real(v);
    }
    out += ',';
    for (std::size_t i = 0; i < r.flags.size(); ++i) out += (i ? ";" : "") + r.flags[i];
    out += '\n';
  }
  return out;
}

nlohmann::json trace_json(const std::vector<TraceRow>& rows) {
  using metrics::json_real;
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"epoch", r.epoch},
                   {"phi_pre", json_real(r.phi_pre)},
                   {"phi_eval", json_real(r.phi_eval)},
                   {"psi", json_real(r.psi)},
                   {"p", json_real(r.p)},
                   {"t", json_real(r.t)},
                   {"mixtureness", json_real(r.mixtureness)},
                   {"redundancy", json_real(r.redundancy)},
                   {"d_inter_pre", json_real(r.d_inter_pre)},
                   {"d_intra_pre", json_real(r.d_intra_pre)},
                   {"probe_top1", json_real(r.probe_top1)},
                   {"flags", r.flags}});
  }
  return arr;
}

std::vector<TraceRow> parse_trace_csv(std::string_view text) {
  auto lines = split_on(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines[0] != kTraceColumns)
    throw Error(ErrorCode::MalformedTrace, std::string("header must be '") + kTraceColumns + "'");
  std::vector<TraceRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_on(lines[i], ',');
    if (f.size() != 12)
      throw Error(ErrorCode::MalformedTrace, "line " + std::to_string(i + 1) + " has " + std::to_string(f.size()) +
                                                 " fields, expected 12");
    TraceRow r;
    std::uint32_t epoch = 0;
    const auto [ptr, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), epoch);
    if (f[0].empty() || ec != std::errc() || ptr != f[0].data() + f[0].size())
      throw Error(ErrorCode::MalformedTrace, "line " + std::to_string(i + 1) + ": bad epoch");
    r.epoch = epoch;
    double* slots[] = {&r.phi_pre, &r.phi_eval,   &r.psi,         &r.p,           &r.t,
                       &r.mixtureness, &r.redundancy, &r.d_inter_pre, &r.d_intra_pre, &r.probe_top1};
    for (std::size_t c = 0; c < 10; ++c) *slots[c] = parse_real(f[c + 1], i + 1);
    if (!f[11].empty())
      for (auto flag : split_on(f[11], ';')) r.flags.emplace_back(flag);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace xfer::eval
