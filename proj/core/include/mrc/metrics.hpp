#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mrc/codec/blob.hpp"
#include "mrc/codec/interp_codec.hpp"
#include "mrc/grid.hpp"
#include "mrc/postprocess.hpp"

namespace mrc {

// 20 log10(range(orig) / rmse); +inf when the inputs are identical.
double psnr(std::span<const double> orig, std::span<const double> recon);
double psnr(const Volume& orig, const Volume& recon);

inline constexpr std::size_t kSsimWindow = 8;
inline constexpr std::size_t kSsimStride = 4;

// Mean SSIM over 8³ windows placed every 4 cells, K1 = 0.01, K2 = 0.03 and
// dynamic range range(orig) (1 when orig is constant).
// Throws ShapeError on mismatched shapes or a volume smaller than the window.
double ssim(const Volume& orig, const Volume& recon);

double max_abs_error(std::span<const double> orig, std::span<const double> recon);

struct RateDistortionPoint {
  double eb = 0.0;
  std::uint64_t compressed_bytes = 0;
  std::uint64_t original_bytes = 0;
  double cr = 0.0;
  double psnr_db = 0.0;
  double ssim = 0.0;
};

inline double compression_ratio(std::uint64_t original_bytes, std::uint64_t compressed_bytes) {
  return static_cast<double>(original_bytes) / static_cast<double>(compressed_bytes);
}

struct SweepOptions {
  CodecId codec = CodecId::interp;
  ErrorBoundPolicy policy{};  // eb is replaced by each swept bound
  CodecOptions codec_options{};
  IntensityFamily post = IntensityFamily::off;
  std::size_t post_blocksize = 4;
  std::uint64_t seed = 0;
  std::size_t original_scalar_bytes = 8;
};

// Compress, decompress, optionally post-process (intensity chosen on a <=5%
// sample) and measure, once per bound. CR is not required to be monotone.
std::vector<RateDistortionPoint> rd_sweep(const Volume& v, const std::vector<double>& ebs, const SweepOptions& opts);

// One JSON object per line / a CSV table with a header row.
std::string to_json_lines(const std::vector<RateDistortionPoint>& points);
std::string to_csv(const std::vector<RateDistortionPoint>& points);

}  // namespace mrc
