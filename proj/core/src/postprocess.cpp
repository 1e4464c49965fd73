#include "mrc/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrc/error.hpp"
#include "mrc/parallel.hpp"

namespace mrc {

IntensityFamily parse_intensity_family(std::string_view name) {
  if (name == "off" || name == "none") return IntensityFamily::off;
  if (name == "sz") return IntensityFamily::sz_like;
  if (name == "zfp") return IntensityFamily::zfp_like;
  throw ShapeError("unknown post-processing family '" + std::string(name) + "'");
}

std::vector<double> intensity_candidates(IntensityFamily family) {
  std::vector<double> out;
  const double step = family == IntensityFamily::zfp_like ? 0.005 : 0.05;
  if (family == IntensityFamily::off) return out;
  for (int k = 1; k <= 10; ++k) out.push_back(step * k);
  return out;
}

double clamp_to_band(double b_mid, double d4, double a, double eb) {
  const double band = a * eb;
  double r = std::max(std::min(b_mid, d4 + band), d4 - band);
  while (std::fabs(r - d4) > band) r = std::nextafter(r, d4);
  return r;
}

namespace {

void check_pass_args(const Dims& dims, std::size_t n_values, double eb, std::size_t blocksize, double a) {
  if (n_values != dims.count()) throw ShapeError("post-processing input does not match dims");
  if (blocksize < 2) throw ShapeError("post-processing needs a block size of at least 2");
  if (!(eb > 0.0) || !std::isfinite(eb)) throw DataError("post-processing bound must be positive");
  if (!(a > 0.0 && a <= 1.0)) throw DataError("intensity must lie in (0, 1]");
}

}  // namespace

std::size_t postprocess_axis(std::vector<double>& values, const Dims& dims, int axis, double eb,
                             std::size_t blocksize, double a, const BlockPresence* presence,
                             std::span<const double> anchor) {
  check_pass_args(dims, values.size(), eb, blocksize, a);
  if (!anchor.empty() && anchor.size() != values.size()) throw ShapeError("anchor does not match the values");
  if (axis < 0 || axis > 2) throw ShapeError("axis must be 0, 1 or 2");
  const std::size_t n = dims[static_cast<std::size_t>(axis)];
  const std::size_t stride = axis == 0 ? 1 : (axis == 1 ? dims.nx : dims.nx * dims.ny);

  std::vector<std::size_t> boundaries;
  for (std::size_t p = blocksize - 1; p + 1 < n; p += blocksize) boundaries.push_back(p);
  if (boundaries.empty()) return 0;

  // Lines orthogonal to `axis`, indexed by the other two coordinates.
  const std::size_t lines = dims.count() / n;
  std::vector<std::uint8_t> touched(lines * boundaries.size(), 0);
  const std::vector<double> src = values;
  const std::span<const double> centre = anchor.empty() ? std::span<const double>(src) : anchor;
  parallel_for(lines, [&](std::size_t line) {
    std::size_t base;
    std::size_t c1, c2;
    if (axis == 0) {
      c1 = line % dims.ny;
      c2 = line / dims.ny;
      base = linear_index(dims, 0, c1, c2);
    } else if (axis == 1) {
      c1 = line % dims.nx;
      c2 = line / dims.nx;
      base = linear_index(dims, c1, 0, c2);
    } else {
      c1 = line % dims.nx;
      c2 = line / dims.nx;
      base = linear_index(dims, c1, c2, 0);
    }
    for (std::size_t b = 0; b < boundaries.size(); ++b) {
      const std::size_t p = boundaries[b];
      if (presence) {
        const Index3 here = unlinear_index(dims, base + p * stride);
        const Index3 next = unlinear_index(dims, base + (p + 1) * stride);
        if (!presence->cell_present(here.x, here.y, here.z) || !presence->cell_present(next.x, next.y, next.z)) {
          continue;
        }
      }
      const double d3 = src[base + (p - 1) * stride];
      const double d4 = src[base + p * stride];
      const double d5 = src[base + (p + 1) * stride];
      values[base + p * stride] = clamp_to_band(bezier_mid(d3, d4, d5), centre[base + p * stride], a, eb);
      touched[line * boundaries.size() + b] = 1;
    }
  });
  std::size_t count = 0;
  for (const auto t : touched) count += t;
  return count;
}

std::vector<double> apply_postprocess(std::span<const double> decomp, const Dims& dims, double eb,
                                      std::size_t blocksize, const IntensityConfig& cfg,
                                      const BlockPresence* presence) {
  std::vector<double> out(decomp.begin(), decomp.end());
  if (!cfg.enabled()) return out;
  for (int axis = 0; axis < 3; ++axis) {
    postprocess_axis(out, dims, axis, eb, blocksize, cfg.a[static_cast<std::size_t>(axis)], presence, decomp);
  }
  return out;
}

Volume apply_postprocess(const Volume& decomp, double eb, std::size_t blocksize, const IntensityConfig& cfg) {
  return Volume(decomp.dims(), apply_postprocess(decomp.values(), decomp.dims(), eb, blocksize, cfg));
}

namespace {

double squared_error(const std::vector<double>& a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

IntensityConfig select_intensity(const std::vector<Volume>& orig_sample, const std::vector<Volume>& decomp_sample,
                                 double eb, std::size_t blocksize, IntensityFamily family) {
  if (orig_sample.empty() || orig_sample.size() != decomp_sample.size()) {
    throw SamplingError("intensity search needs matching, non-empty samples");
  }
  for (std::size_t r = 0; r < orig_sample.size(); ++r) {
    if (orig_sample[r].dims() != decomp_sample[r].dims()) throw SamplingError("sample region shapes differ");
  }
  IntensityConfig cfg{family, {0.0, 0.0, 0.0}};
  const std::vector<double> candidates = intensity_candidates(family);
  if (candidates.empty()) return cfg;

  std::vector<std::vector<double>> current;
  for (const Volume& v : decomp_sample) current.emplace_back(v.values().begin(), v.values().end());

  for (int axis = 0; axis < 3; ++axis) {
    double best_err = 0.0;
    double best_a = candidates.front();
    std::vector<std::vector<double>> best_out;
    for (const double a : candidates) {
      std::vector<std::vector<double>> out = current;
      double err = 0.0;
      for (std::size_t r = 0; r < out.size(); ++r) {
        postprocess_axis(out[r], decomp_sample[r].dims(), axis, eb, blocksize, a, nullptr,
                         decomp_sample[r].values());
        err += squared_error(out[r], orig_sample[r].values());
      }
      if (best_out.empty() || err < best_err) {
        best_err = err;
        best_a = a;
        best_out = std::move(out);
      }
    }
    cfg.a[static_cast<std::size_t>(axis)] = best_a;
    current = std::move(best_out);
  }
  return cfg;
}

}  // namespace mrc
