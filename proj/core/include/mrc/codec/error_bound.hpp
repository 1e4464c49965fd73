#pragma once

namespace mrc {

// Absolute error bound plus the per-level tightening used by the
// interpolation codec: eb_l = eb / min(alpha^(maxlevel - l), beta).
struct ErrorBoundPolicy {
  double eb = 1e-3;
  bool adaptive = false;
  double alpha = 2.25;
  double beta = 8.0;

  // Throws DataError unless eb > 0, alpha > 1 and beta >= 1 (all finite).
  void validate() const;
};

double level_error_bound(const ErrorBoundPolicy& policy, unsigned level, unsigned maxlevel);

}  // namespace mrc
