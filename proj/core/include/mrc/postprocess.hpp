#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mrc/grid.hpp"
#include "mrc/sampling.hpp"

namespace mrc {

enum class IntensityFamily : std::uint8_t { off = 0, sz_like = 1, zfp_like = 2 };

IntensityFamily parse_intensity_family(std::string_view name);

// Candidate intensities, ascending: {0.05, ..., 0.50} for sz-like and
// {0.005, ..., 0.050} for zfp-like codecs.
std::vector<double> intensity_candidates(IntensityFamily family);

struct IntensityConfig {
  IntensityFamily family = IntensityFamily::off;
  std::array<double, 3> a{0.0, 0.0, 0.0};  // per axis x, y, z

  bool enabled() const { return family != IntensityFamily::off; }
  friend bool operator==(const IntensityConfig&, const IntensityConfig&) = default;
};

// Quadratic Bezier through d3 -> d5 with control point d4, evaluated at t = 0.5.
inline double bezier_mid(double d3, double d4, double d5) { return 0.25 * d3 + 0.5 * d4 + 0.25 * d5; }

// max(min(b_mid, d4 + a*eb), d4 - a*eb), nudged inward by an ulp when
// rounding of d4 +/- a*eb would leave |result - d4| above a*eb.
double clamp_to_band(double b_mid, double d4, double a, double eb);

// One pass along `axis` (0 = x, 1 = y, 2 = z): the last point of every block
// that has a following block is replaced by the Bezier midpoint of its
// in-block predecessor, itself and the first point of the next block, clamped
// to a*eb around the corresponding `anchor` value (the decompressed data; the
// current values when empty). With a presence mask, boundaries touching an
// absent block are skipped.
// Returns the number of modified positions (eligible boundary points).
std::size_t postprocess_axis(std::vector<double>& values, const Dims& dims, int axis, double eb,
                             std::size_t blocksize, double a, const BlockPresence* presence = nullptr,
                             std::span<const double> anchor = {});

// Runs the x, y and z passes in order with the configured intensities. Every
// pass reads the previous pass's output but clamps around `decomp`, so a point
// on several block boundaries still moves by at most max(a)*eb.
std::vector<double> apply_postprocess(std::span<const double> decomp, const Dims& dims, double eb,
                                      std::size_t blocksize, const IntensityConfig& cfg,
                                      const BlockPresence* presence = nullptr);
Volume apply_postprocess(const Volume& decomp, double eb, std::size_t blocksize, const IntensityConfig& cfg);

// Coordinate search over the candidate set, one sweep in x, y, z order: each
// axis keeps the candidate with the lowest L2 error against the originals on
// the sampled regions (ties go to the smaller value), and later axes start from
// the output of the earlier ones.
// Throws SamplingError on empty or mismatched samples.
IntensityConfig select_intensity(const std::vector<Volume>& orig_sample, const std::vector<Volume>& decomp_sample,
                                 double eb, std::size_t blocksize, IntensityFamily family);

}  // namespace mrc
