#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mrc/codec/error_bound.hpp"
#include "mrc/codec/huffman.hpp"
#include "mrc/grid.hpp"
#include "mrc/layout.hpp"

namespace mrc {

enum class CodecId : std::uint8_t {
  stored = 0,  // raw f64 values, no quantization (uncompressed containers)
  interp = 1,
  block_lorenzo = 2,
};

// Self-describing compressed array. Byte layout (little-endian):
//   "MRB1", codec u8, dims 3 x u64, eb f64, adaptive u8, alpha f64, beta f64,
//   arrangement u8, padded u8, u u32, block count u64 + count x (bx, by, bz u32),
//   literal count u64, Huffman table (u32 n, n x (u32 symbol, u8 length)),
//   payload length u64, payload.
struct CompressedBlob {
  CodecId codec = CodecId::interp;
  Dims dims{};
  ErrorBoundPolicy policy{};
  Arrangement arrangement = Arrangement::none;
  bool padded = false;
  std::uint32_t u = 0;
  std::vector<BlockCoord> order;
  EntropyCoded entropy;

  std::vector<std::uint8_t> serialize() const;
  // Throws FormatError on bad magic, unknown ids or truncation.
  static CompressedBlob parse(std::span<const std::uint8_t> bytes);
  static CompressedBlob read(ByteReader& r);
  void write(ByteWriter& w) const;
};

// Raw f64 storage wrapped in a blob (codec id 0).
CompressedBlob store_uncompressed(const Dims& dims, std::span<const double> values);
std::vector<double> load_stored(const CompressedBlob& blob);

// Copies array metadata (arrangement, padding, u, block order) into a blob.
void attach_layout(CompressedBlob& blob, const MergedArray& m);
// Rebuilds a MergedArray around decompressed values using the blob's layout.
MergedArray detach_layout(const CompressedBlob& blob, std::vector<double> values);

}  // namespace mrc
