#include "mrc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "mrc/codec/codec.hpp"
#include "mrc/error.hpp"
#include "mrc/parallel.hpp"
#include "mrc/sampling.hpp"

namespace mrc {

double psnr(std::span<const double> orig, std::span<const double> recon) {
  if (orig.size() != recon.size() || orig.empty()) throw ShapeError("psnr inputs differ in shape");
  std::vector<double> sq(orig.size());
  for (std::size_t i = 0; i < orig.size(); ++i) {
    const double d = orig[i] - recon[i];
    sq[i] = d * d;
  }
  const double mse = pairwise_sum(sq.data(), sq.size()) / static_cast<double>(sq.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  const auto [lo, hi] = std::minmax_element(orig.begin(), orig.end());
  return 20.0 * std::log10((*hi - *lo) / std::sqrt(mse));
}

double psnr(const Volume& orig, const Volume& recon) {
  if (orig.dims() != recon.dims()) throw ShapeError("psnr inputs differ in shape");
  return psnr(orig.values(), recon.values());
}

double max_abs_error(std::span<const double> orig, std::span<const double> recon) {
  if (orig.size() != recon.size()) throw ShapeError("inputs differ in shape");
  double m = 0.0;
  for (std::size_t i = 0; i < orig.size(); ++i) m = std::max(m, std::fabs(orig[i] - recon[i]));
  return m;
}

double ssim(const Volume& orig, const Volume& recon) {
  const Dims& d = orig.dims();
  if (d != recon.dims()) throw ShapeError("ssim inputs differ in shape");
  if (d.nx < kSsimWindow || d.ny < kSsimWindow || d.nz < kSsimWindow) {
    throw ShapeError("ssim needs at least 8 cells per axis");
  }
  const double range = orig.value_range().span();
  const double L = range > 0.0 ? range : 1.0;
  const double c1 = (0.01 * L) * (0.01 * L);
  const double c2 = (0.03 * L) * (0.03 * L);

  const std::size_t wx = (d.nx - kSsimWindow) / kSsimStride + 1;
  const std::size_t wy = (d.ny - kSsimWindow) / kSsimStride + 1;
  const std::size_t wz = (d.nz - kSsimWindow) / kSsimStride + 1;
  const Dims windows{wx, wy, wz};
  std::vector<double> local(windows.count());
  const double n = static_cast<double>(kSsimWindow * kSsimWindow * kSsimWindow);

  parallel_for(windows.count(), [&](std::size_t w) {
    const Index3 o = unlinear_index(windows, w);
    const std::size_t x0 = o.x * kSsimStride, y0 = o.y * kSsimStride, z0 = o.z * kSsimStride;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t z = z0; z < z0 + kSsimWindow; ++z)
      for (std::size_t y = y0; y < y0 + kSsimWindow; ++y)
        for (std::size_t x = x0; x < x0 + kSsimWindow; ++x) {
          const std::size_t i = linear_index(d, x, y, z);
          const double a = orig[i], b = recon[i];
          sx += a;
          sy += b;
          sxx += a * a;
          syy += b * b;
          sxy += a * b;
        }
    const double mx = sx / n, my = sy / n;
    const double vx = std::max(0.0, sxx / n - mx * mx);
    const double vy = std::max(0.0, syy / n - my * my);
    const double cov = sxy / n - mx * my;
    local[w] = ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
  });
  return pairwise_sum(local.data(), local.size()) / static_cast<double>(local.size());
}

std::vector<RateDistortionPoint> rd_sweep(const Volume& v, const std::vector<double>& ebs, const SweepOptions& opts) {
  std::vector<RateDistortionPoint> out;
  for (const double eb : ebs) {
    ErrorBoundPolicy policy = opts.policy;
    policy.eb = eb;
    const CompressedBlob blob = compress(opts.codec, v.dims(), v.values(), policy, opts.codec_options);
    std::vector<double> recon = decompress_values(blob);

    if (opts.post != IntensityFamily::off) {
      const SamplingPlan plan = make_sampling_plan(v.dims(), opts.post_blocksize, opts.seed);
      const auto orig_s = extract_regions(v.values(), v.dims(), plan.regions);
      const auto dec_s = extract_regions(recon, v.dims(), plan.regions);
      const IntensityConfig cfg = select_intensity(orig_s, dec_s, eb, opts.post_blocksize, opts.post);
      recon = apply_postprocess(recon, v.dims(), eb, opts.post_blocksize, cfg);
    }

    const Volume r(v.dims(), std::move(recon));
    RateDistortionPoint p;
    p.eb = eb;
    p.compressed_bytes = blob.serialize().size();
    p.original_bytes = v.size() * opts.original_scalar_bytes;
    p.cr = compression_ratio(p.original_bytes, p.compressed_bytes);
    p.psnr_db = psnr(v, r);
    const Dims& d = v.dims();
    p.ssim = (d.nx >= kSsimWindow && d.ny >= kSsimWindow && d.nz >= kSsimWindow)
                 ? ssim(v, r)
                 : std::numeric_limits<double>::quiet_NaN();
    out.push_back(p);
  }
  return out;
}

namespace {

std::string number(double x) {
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  if (std::isnan(x)) return "null";
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

}  // namespace

std::string to_json_lines(const std::vector<RateDistortionPoint>& points) {
  std::ostringstream s;
  for (const auto& p : points) {
    s << "{\"eb\":" << number(p.eb) << ",\"compressed_bytes\":" << p.compressed_bytes
      << ",\"original_bytes\":" << p.original_bytes << ",\"cr\":" << number(p.cr)
      << ",\"psnr_db\":" << number(p.psnr_db) << ",\"ssim\":" << number(p.ssim) << "}\n";
  }
  return s.str();
}

std::string to_csv(const std::vector<RateDistortionPoint>& points) {
  std::ostringstream s;
  s << "eb,compressed_bytes,original_bytes,cr,psnr_db,ssim\n" << std::setprecision(17);
  for (const auto& p : points) {
    s << p.eb << ',' << p.compressed_bytes << ',' << p.original_bytes << ',' << p.cr << ',' << p.psnr_db << ','
      << p.ssim << '\n';
  }
  return s.str();
}

}  // namespace mrc
