#include "mrc/raw_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "mrc/error.hpp"

namespace mrc {

static_assert(std::endian::native == std::endian::little,
              "raw volume I/O assumes a little-endian host");

ScalarType parse_scalar_type(std::string_view name) {
  if (name == "f32" || name == "float32" || name == "float") return ScalarType::f32;
  if (name == "f64" || name == "float64" || name == "double") return ScalarType::f64;
  throw ShapeError("unknown scalar type '" + std::string(name) + "' (expected f32 or f64)");
}

Volume decode_raw(std::span<const std::uint8_t> bytes, const Dims& dims, ScalarType type) {
  const std::size_t width = scalar_bytes(type);
  if (bytes.size() != dims.count() * width) {
    throw ShapeError("raw volume holds " + std::to_string(bytes.size()) + " bytes, expected " +
                     std::to_string(dims.count() * width));
  }
  std::vector<double> values(dims.count());
  if (type == ScalarType::f64) {
    std::memcpy(values.data(), bytes.data(), bytes.size());
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) {
      float f;
      std::memcpy(&f, bytes.data() + i * 4, 4);
      values[i] = f;
    }
  }
  return Volume(dims, std::move(values));
}

Volume read_raw(const std::filesystem::path& path, const Dims& dims, ScalarType type) {
  return decode_raw(read_file(path), dims, type);
}

std::vector<std::uint8_t> encode_raw(std::span<const double> values, ScalarType type) {
  std::vector<std::uint8_t> out(values.size() * scalar_bytes(type));
  if (type == ScalarType::f64) {
    std::memcpy(out.data(), values.data(), out.size());
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) {
      const float f = static_cast<float>(values[i]);
      std::memcpy(out.data() + i * 4, &f, 4);
    }
  }
  return out;
}

void write_raw(const std::filesystem::path& path, std::span<const double> values, ScalarType type) {
  write_file_atomic(path, encode_raw(values, type));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace mrc
