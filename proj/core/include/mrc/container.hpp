#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mrc/codec/blob.hpp"
#include "mrc/postprocess.hpp"
#include "mrc/raw_io.hpp"
#include "mrc/roi.hpp"
#include "mrc/sampling.hpp"

namespace mrc {

// Original values of one sampled region, kept for offline intensity search
// and error-model fitting.
struct StoredSample {
  SampleRegion region;
  std::vector<double> values;  // edge³ values, x fastest
  friend bool operator==(const StoredSample&, const StoredSample&) = default;
};

struct ContainerLevel {
  Dims dims{};
  std::uint32_t u = 0;
  std::vector<BlockCoord> coords;
  std::optional<CompressedBlob> blob;  // absent when the level holds no blocks
  IntensityConfig post{};
  std::vector<StoredSample> samples;
};

// On-disk multi-resolution dataset. Layout (little-endian):
//   "MRC1", version u16, scalar width u8, level count u8, ROI block u32,
//   ROI percent f64, mask bit count u64, mask bytes (8 blocks per byte, LSB
//   first, block-index order), then per level: dims 3 x u64, u u32,
//   block count u64, coords (3 x u32 each), blob length u64 + blob,
//   post family u8, a 3 x f64, sample section offset u64 (0 = none).
//   Sample sections follow the last level: "MRS1", region count u64, per
//   region origin 3 x u64, edge u64, edge³ f64 values.
struct ContainerFile {
  static constexpr std::uint16_t kVersion = 1;

  std::uint16_t version = kVersion;
  ScalarType scalar = ScalarType::f64;
  RoiConfig roi{};
  RoiMask roi_mask;
  std::vector<ContainerLevel> levels;

  std::vector<std::uint8_t> encode() const;
  // Throws FormatError on bad magic, unsupported version or malformed content.
  static ContainerFile decode(std::span<const std::uint8_t> bytes);
};

}  // namespace mrc
