#pragma once

#include <cstdint>

namespace mrc {

// Largest |code| emitted before falling back to a verbatim literal.
inline constexpr std::int32_t kCodeCap = 1 << 15;
// Code value standing in for "next literal"; outside [-kCodeCap, kCodeCap].
inline constexpr std::int32_t kLiteralMarker = kCodeCap + 1;

struct QuantizedValue {
  std::int32_t code;  // kLiteralMarker when the value must be stored verbatim
  double recon;       // value the decoder reproduces
};

// Uniform quantization of actual - pred into bins of width 2*eb, rounding
// half away from zero. Falls back to a literal when the code exceeds the cap
// or rounding would break |recon - actual| <= eb.
// Throws DataError on non-finite inputs or a non-positive bound.
QuantizedValue quantize(double pred, double actual, double eb);

inline double dequantize(double pred, std::int32_t code, double eb) {
  return pred + 2.0 * eb * static_cast<double>(code);
}

}  // namespace mrc
