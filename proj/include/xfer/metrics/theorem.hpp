#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace xfer::metrics {

/// One checkpoint of the psi / P / t series.
struct TheoremRecord {
  std::uint32_t epoch = 0;
  double phi_pre = 0.0;
  double phi_eval = 0.0;
  double phi_pre_inv = 0.0;
  double psi = 0.0;
  double p = 0.0;
  double t_estimate = std::numeric_limits<double>::infinity();
  bool t_unbounded = true;
};

struct TheoremTrace {
  std::vector<TheoremRecord> records;
  double psi0 = 0.0;  ///< filled by estimate_threshold
};

/// t = [ (psi/psi0 - 1) (1/P - 1) ]^-1, or +inf when the bracket is not positive.
double threshold_from(double psi, double psi0, double p);

/// Least-squares intercept of psi against phi_pre_inv, clamped below by
/// 1e-3 * min(psi).
double estimate_psi0(const TheoremTrace& trace);

/// Fills psi0 and every record's t_estimate / t_unbounded; returns the t series.
/// Needs at least 3 records with finite psi, phi_pre_inv and P in (0, 1].
std::vector<double> estimate_threshold(TheoremTrace& trace);

}  // namespace xfer::metrics
