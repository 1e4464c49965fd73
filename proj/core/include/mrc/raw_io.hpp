#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "mrc/grid.hpp"

namespace mrc {

// On-disk scalar width of a headerless raw volume.
enum class ScalarType : std::uint8_t { f32 = 4, f64 = 8 };

ScalarType parse_scalar_type(std::string_view name);
inline std::size_t scalar_bytes(ScalarType t) { return static_cast<std::size_t>(t); }

// Headerless little-endian array, x fastest. f32 input is widened to double.
Volume read_raw(const std::filesystem::path& path, const Dims& dims, ScalarType type);
Volume decode_raw(std::span<const std::uint8_t> bytes, const Dims& dims, ScalarType type);

std::vector<std::uint8_t> encode_raw(std::span<const double> values, ScalarType type);
// Writes via a temporary file and rename so readers never observe partial output.
void write_raw(const std::filesystem::path& path, std::span<const double> values, ScalarType type);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace mrc
