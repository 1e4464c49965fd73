#include "mrc/codec/error_bound.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrc/error.hpp"

namespace mrc {

void ErrorBoundPolicy::validate() const {
  if (!(std::isfinite(eb) && eb > 0.0)) throw DataError("error bound must be positive and finite");
  if (!(std::isfinite(alpha) && alpha > 1.0)) throw DataError("alpha must exceed 1");
  if (!(std::isfinite(beta) && beta >= 1.0)) throw DataError("beta must be at least 1");
}

double level_error_bound(const ErrorBoundPolicy& policy, unsigned level, unsigned maxlevel) {
  if (level > maxlevel) {
    throw BoundsError("level " + std::to_string(level) + " exceeds maxlevel " + std::to_string(maxlevel));
  }
  if (!policy.adaptive) return policy.eb;
  const double shrink = std::min(std::pow(policy.alpha, static_cast<double>(maxlevel - level)), policy.beta);
  return policy.eb / shrink;
}

}  // namespace mrc
