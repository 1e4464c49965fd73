#include "mrc/codec/quantizer.hpp"

#include <cmath>

#include "mrc/error.hpp"

namespace mrc {

QuantizedValue quantize(double pred, double actual, double eb) {
  if (!std::isfinite(pred) || !std::isfinite(actual)) throw DataError("cannot quantize a non-finite value");
  if (!(eb > 0.0) || !std::isfinite(eb)) throw DataError("quantization bound must be positive");
  const double q = (actual - pred) / (2.0 * eb);
  if (!(std::fabs(q) <= static_cast<double>(kCodeCap))) return {kLiteralMarker, actual};
  const auto code = static_cast<std::int32_t>(std::round(q));
  const double recon = dequantize(pred, code, eb);
  if (!(std::fabs(recon - actual) <= eb)) return {kLiteralMarker, actual};
  return {code, recon};
}

}  // namespace mrc
