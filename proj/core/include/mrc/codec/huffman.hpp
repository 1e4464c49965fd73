#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mrc/byte_stream.hpp"
#include "mrc/codec/lossless.hpp"

namespace mrc {

// Canonical Huffman code lengths, sorted by (length, symbol).
struct HuffmanTable {
  struct Entry {
    std::uint32_t symbol;
    std::uint8_t length;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::vector<Entry> entries;

  void write(ByteWriter& w) const;
  static HuffmanTable read(ByteReader& r);
  friend bool operator==(const HuffmanTable&, const HuffmanTable&) = default;
};

// Longest code the builder emits; deeper trees are flattened.
inline constexpr unsigned kMaxCodeLength = 32;

// Code lengths for the given symbol frequencies (zero-frequency symbols are
// skipped). A single used symbol gets length 1.
HuffmanTable build_huffman_table(const std::vector<std::pair<std::uint32_t, std::uint64_t>>& freqs);

// Residual codes plus their literal escapes, ready for the blob.
struct EntropyCoded {
  std::uint64_t literal_count = 0;
  HuffmanTable table;
  // [u8 lossless id][lossless(u64 bit count, Huffman bits, literal f64s)]
  std::vector<std::uint8_t> payload;
};

// Codes must lie in [-kCodeCap, kCodeCap] or equal kLiteralMarker; the number
// of markers must equal literals.size().
EntropyCoded entropy_encode(std::span<const std::int32_t> codes, std::span<const double> literals,
                            LosslessKind pass = LosslessKind::identity);

struct EntropyDecoded {
  std::vector<std::int32_t> codes;
  std::vector<double> literals;
};

// Throws FormatError on any inconsistency.
EntropyDecoded entropy_decode(const EntropyCoded& coded, std::size_t code_count);

}  // namespace mrc
