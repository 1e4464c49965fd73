#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace mrc {

// Cell counts per axis, x fastest.
struct Dims {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t nz = 0;

  std::size_t count() const { return nx * ny * nz; }
  std::size_t operator[](std::size_t axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }
  friend bool operator==(const Dims&, const Dims&) = default;
};

struct Index3 {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t z = 0;
  friend bool operator==(const Index3&, const Index3&) = default;
};

inline std::size_t linear_index(const Dims& d, std::size_t x, std::size_t y, std::size_t z) {
  return x + d.nx * (y + d.ny * z);
}

inline Index3 unlinear_index(const Dims& d, std::size_t i) {
  return {i % d.nx, (i / d.nx) % d.ny, i / (d.nx * d.ny)};
}

struct ValueRange {
  double min = 0.0;
  double max = 0.0;
  double span() const { return max - min; }
  friend bool operator==(const ValueRange&, const ValueRange&) = default;
};

// Dense 3D scalar field stored as doubles in x-fastest order. Immutable once
// constructed; the value range is computed eagerly and always matches the data.
class Volume {
 public:
  Volume() = default;
  // Throws ShapeError on size mismatch or zero extent, DataError on NaN/Inf.
  Volume(Dims dims, std::vector<double> values);
  // Constant-filled volume.
  Volume(Dims dims, double fill);

  const Dims& dims() const { return dims_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  const ValueRange& value_range() const { return range_; }

  double at(std::size_t x, std::size_t y, std::size_t z) const {
    return values_[linear_index(dims_, x, y, z)];
  }
  double operator[](std::size_t i) const { return values_[i]; }

  // Moves the storage out; the volume is left empty.
  std::vector<double> release() &&;

  friend bool operator==(const Volume& a, const Volume& b) {
    return a.dims_ == b.dims_ && a.values_ == b.values_;
  }

 private:
  Dims dims_{};
  std::vector<double> values_;
  ValueRange range_{};
};

// Coordinates of a block in the block grid (not in cells).
struct BlockCoord {
  std::uint32_t bx = 0;
  std::uint32_t by = 0;
  std::uint32_t bz = 0;

  // Sort key used by every block list: (bz, by, bx) ascending.
  friend bool operator<(const BlockCoord& a, const BlockCoord& b) {
    if (a.bz != b.bz) return a.bz < b.bz;
    if (a.by != b.by) return a.by < b.by;
    return a.bx < b.bx;
  }
  friend bool operator==(const BlockCoord&, const BlockCoord&) = default;
};

inline bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

// Number of whole blocks of edge `block` per axis. Throws ShapeError unless
// every dim is divisible by `block`.
Dims block_grid(const Dims& d, std::size_t block);

// Exact min/max over the block³ cells of block `c`.
ValueRange block_value_range(const Volume& v, const BlockCoord& c, std::size_t block);

// Copies the block³ cells of block `c` into a flat x-fastest buffer.
std::vector<double> extract_block(const Volume& v, const BlockCoord& c, std::size_t block);

// 2x2x2 mean pooling. Throws ShapeError for odd dims.
Volume downsample2x(const Volume& v);

// Nearest-neighbour replication into 2x2x2 children.
Volume upsample2x(const Volume& v);

// Same operations on raw buffers (used on unit-block payloads).
std::vector<double> downsample2x(std::span<const double> values, const Dims& d);
std::vector<double> upsample(std::span<const double> values, const Dims& d, std::size_t factor);

}  // namespace mrc
