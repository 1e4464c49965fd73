#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "mrc/codec/blob.hpp"
#include "mrc/codec/interp_codec.hpp"
#include "mrc/container.hpp"
#include "mrc/metrics.hpp"
#include "mrc/postprocess.hpp"
#include "mrc/roi.hpp"
#include "mrc/uncertainty.hpp"

namespace mrc {

enum class PadMode : std::uint8_t { automatic, off };

struct CompressOptions {
  CodecId codec = CodecId::interp;
  ErrorBoundPolicy policy{};
  PadMode pad = PadMode::automatic;
  Arrangement arrangement = Arrangement::linear;
  IntensityFamily post = IntensityFamily::off;
  double sample_rate = kMaxSamplingRate;
  bool keep_samples = false;
  std::uint64_t seed = 0;
  CodecOptions codec_options{};
};

// Per-level outcome of compress_dataset, for reporting.
struct LevelReport {
  std::size_t level = 0;
  std::size_t blocks = 0;
  Dims merged_dims{};
  bool padded = false;
  std::uint64_t compressed_bytes = 0;
  double max_error = 0.0;  // vs this level's own (possibly downsampled) original blocks
  double psnr_db = 0.0;
  IntensityConfig post{};
  bool post_skipped = false;  // requested but no sample fitted under the rate cap
  std::size_t sample_regions = 0;
};

// Block size the post-processor uses for a level compressed with `codec`.
std::size_t post_blocksize(CodecId codec, std::uint32_t u);

// Stores the dataset without compression (codec id 0) in a container.
ContainerFile store_dataset(const MultiResDataset& ds, ScalarType scalar);

// Per level: linear (or stacked) merge, padding when enabled and u > 4
// (interpolation codec only), compression, and, when requested, the intensity
// search on a sample of at most sample_rate of the level.
ContainerFile compress_dataset(const MultiResDataset& ds, ScalarType scalar, const CompressOptions& opts,
                               std::vector<LevelReport>* reports = nullptr);

// Decompresses every level, removes padding, unmerges and applies the stored
// post-processing intensities.
MultiResDataset decompress_dataset(const ContainerFile& c);

// Level domain with the level's blocks placed and zeros elsewhere, plus the
// matching presence mask.
struct LevelCanvas {
  Dims dims{};
  std::vector<double> values;
  BlockPresence presence;
};
LevelCanvas level_canvas(const Level& level);
// Writes canvas cells back into the level's block payloads.
void canvas_to_blocks(const LevelCanvas& canvas, Level& level);

// Errors (original - decompressed) and decompressed values over the stored
// sample regions of every level.
struct SampledErrors {
  std::vector<double> errors;
  std::vector<double> values;
};
SampledErrors stored_sample_errors(const ContainerFile& c, const MultiResDataset& decompressed);

// Per-level and whole-domain metrics for one container.
struct DatasetMetrics {
  std::uint64_t original_bytes = 0;
  std::uint64_t compressed_bytes = 0;
  double cr = 0.0;
  std::vector<double> level_psnr;
  std::vector<double> level_max_error;
  double uniform_psnr = 0.0;  // reconstructed uniform grid vs the reference volume
  double uniform_ssim = 0.0;
};
DatasetMetrics evaluate_dataset(const MultiResDataset& original, const MultiResDataset& decompressed,
                                const Volume& reference, std::uint64_t original_bytes, std::uint64_t compressed_bytes);

}  // namespace mrc
