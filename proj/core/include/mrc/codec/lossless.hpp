#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace mrc {

// General-purpose lossless pass applied to the Huffman output.
enum class LosslessKind : std::uint8_t { identity = 0, zlib = 1 };

LosslessKind parse_lossless_kind(std::string_view name);

std::vector<std::uint8_t> lossless_encode(LosslessKind kind, std::span<const std::uint8_t> data);
// Throws FormatError on corrupt input.
std::vector<std::uint8_t> lossless_decode(LosslessKind kind, std::span<const std::uint8_t> data);

}  // namespace mrc
