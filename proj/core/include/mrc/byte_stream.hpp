#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "mrc/error.hpp"

namespace mrc {

static_assert(std::endian::native == std::endian::little, "byte streams assume a little-endian host");

// Appends little-endian scalars to a byte buffer.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) { put(v); }
  void u32(std::uint32_t v) { put(v); }
  void u64(std::uint64_t v) { put(v); }
  void f64(double v) { put(v); }
  void bytes(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
  void tag(const char (&magic)[5]) {
    bytes({reinterpret_cast<const std::uint8_t*>(magic), 4});
  }

  // Overwrites a u64 previously written at `offset`.
  void patch_u64(std::size_t offset, std::uint64_t v) { std::memcpy(buf_.data() + offset, &v, 8); }

  std::size_t size() const { return buf_.size(); }
  std::vector<std::uint8_t>& buffer() { return buf_; }
  std::vector<std::uint8_t> take() && { return std::move(buf_); }

 private:
  template <class T>
  void put(T v) {
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    buf_.insert(buf_.end(), raw, raw + sizeof(T));
  }

  std::vector<std::uint8_t> buf_;
};

// Bounds-checked little-endian reader; throws FormatError on truncation.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() { return get<std::uint8_t>(); }
  std::uint16_t u16() { return get<std::uint16_t>(); }
  std::uint32_t u32() { return get<std::uint32_t>(); }
  std::uint64_t u64() { return get<std::uint64_t>(); }
  double f64() { return get<double>(); }

  std::span<const std::uint8_t> bytes(std::uint64_t n) {
    require(n);
    auto out = data_.subspan(pos_, static_cast<std::size_t>(n));
    pos_ += static_cast<std::size_t>(n);
    return out;
  }

  void expect_tag(const char (&magic)[5], const char* what) {
    auto got = bytes(4);
    if (std::memcmp(got.data(), magic, 4) != 0) {
      throw FormatError(std::string("bad magic for ") + what);
    }
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }
  void seek(std::size_t pos) {
    if (pos > data_.size()) throw FormatError("seek past end of stream");
    pos_ = pos;
  }

 private:
  void require(std::uint64_t n) const {
    if (n > data_.size() - pos_) throw FormatError("unexpected end of stream");
  }
  template <class T>
  T get() {
    require(sizeof(T));
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace mrc
