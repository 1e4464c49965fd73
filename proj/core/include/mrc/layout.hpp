#pragma once

#include <cstdint>
#include <vector>

#include "mrc/grid.hpp"

namespace mrc {

// Cubic chunk of a resolution level; data is u³ values, x fastest.
struct UnitBlock {
  BlockCoord coord;
  std::uint32_t u = 0;
  std::vector<double> data;

  friend bool operator==(const UnitBlock&, const UnitBlock&) = default;
};

enum class Arrangement : std::uint8_t { none = 0, linear = 1, stacked = 2 };

// A level's unit blocks packed into one 3D array for compression.
//
// linear:  block i occupies z-slab [i*u, (i+1)*u); dims (u, u, u*k), or
//          (u+1, u+1, u*k) once padded.
// stacked: blocks placed row-major (x fastest) into a (gx, gy, gz) block grid;
//          slots past `order.size()` hold filler and are dropped on unmerge.
struct MergedArray {
  Dims dims{};
  std::vector<double> values;
  std::vector<BlockCoord> order;
  bool padded = false;
  std::uint32_t u = 0;
  Arrangement arrangement = Arrangement::linear;

  std::size_t block_count() const { return order.size(); }
  friend bool operator==(const MergedArray&, const MergedArray&) = default;
};

// Throws ShapeError for an empty list, mismatched u, or wrong payload sizes.
MergedArray linear_merge(const std::vector<UnitBlock>& blocks);

// Smallest block grid with gx*gy*gz >= k, minimizing max(g) and then gx*gy*gz.
// Among equal candidates the one with the smallest gz, then gy, wins.
Dims stack_grid(std::size_t k);
MergedArray stack_merge(const std::vector<UnitBlock>& blocks);

// Inverse of linear_merge / stack_merge. Throws StateError on padded input.
std::vector<UnitBlock> unmerge(const MergedArray& m);

// Appends one linearly extrapolated layer at the high end of x, then of y
// (the y layer includes the new x column). Identity for u <= 4.
MergedArray pad_linear(const MergedArray& m);
// Same padding without the u > 4 gate; used to measure the size overhead.
MergedArray pad_linear_forced(const MergedArray& m);
// Drops the pad layers. Throws StateError when m is not padded.
MergedArray unpad(const MergedArray& m);

// Whether auto padding applies for unit size u.
inline bool padding_applies(std::uint32_t u) { return u > 4; }

}  // namespace mrc
