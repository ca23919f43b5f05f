#include "xfer/metrics/theorem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xfer/error.hpp"

namespace xfer::metrics {

namespace {

// Relative slack under which psi/psi0 - 1 counts as zero.
constexpr double kFlatTolerance = 64 * std::numeric_limits<double>::epsilon();

void check_records(const TheoremTrace& trace) {
  if (trace.records.size() < 3) {
    throw Error(ErrorCode::TooFewCheckpoints,
                "threshold needs >= 3 checkpoints, got " + std::to_string(trace.records.size()));
  }
  for (const auto& r : trace.records) {
    if (!std::isfinite(r.psi) || !std::isfinite(r.phi_pre_inv) || !std::isfinite(r.p))
      throw Error(ErrorCode::NonFinite, "epoch " + std::to_string(r.epoch) + " has a non-finite input");
    if (!(r.p > 0.0 && r.p <= 1.0))
      throw Error(ErrorCode::ProbabilityOutOfRange, "epoch " + std::to_string(r.epoch) + ": P outside (0, 1]");
    if (!(r.psi > 0.0)) throw Error(ErrorCode::DegenerateInter, "epoch " + std::to_string(r.epoch) + ": psi <= 0");
  }
}

}  // namespace

double threshold_from(double psi, double psi0, double p) {
  if (!std::isfinite(psi) || !std::isfinite(psi0) || !std::isfinite(p))
    throw Error(ErrorCode::NonFinite, "threshold inputs must be finite");
  if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::ProbabilityOutOfRange, "P outside (0, 1]");
  if (!(psi0 > 0.0)) throw Error(ErrorCode::DegenerateInter, "psi0 <= 0");
  double ratio = psi / psi0 - 1.0;
  if (std::abs(ratio) <= kFlatTolerance) ratio = 0.0;
  const double bracket = ratio * (1.0 / p - 1.0);
  if (!(bracket > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / bracket;
}

double estimate_psi0(const TheoremTrace& trace) {
  check_records(trace);
  const auto n = static_cast<double>(trace.records.size());
  double mx = 0.0, my = 0.0, min_psi = trace.records.front().psi;
  for (const auto& r : trace.records) {
    mx += r.phi_pre_inv;
    my += r.psi;
    min_psi = std::min(min_psi, r.psi);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& r : trace.records) {
    sxx += (r.phi_pre_inv - mx) * (r.phi_pre_inv - mx);
    sxy += (r.phi_pre_inv - mx) * (r.psi - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  const double intercept = my - slope * mx;
  return std::max(intercept, min_psi * 1e-3);
}

std::vector<double> estimate_threshold(TheoremTrace& trace) {
  trace.psi0 = estimate_psi0(trace);
  std::vector<double> out;
  out.reserve(trace.records.size());
  for (auto& r : trace.records) {
    r.t_estimate = threshold_from(r.psi, trace.psi0, r.p);
    r.t_unbounded = std::isinf(r.t_estimate);
    out.push_back(r.t_estimate);
  }
  return out;
}

}  // namespace xfer::metrics
