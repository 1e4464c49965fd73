#pragma once

#include <cstdint>
#include <vector>

#include "mrc/grid.hpp"
#include "mrc/layout.hpp"

namespace mrc {

struct RoiConfig {
  std::uint32_t block = 16;  // power of two >= 8
  double percent = 15.0;     // (0, 100]

  // Throws ShapeError on an invalid block edge or percentage.
  void validate() const;
};

// One flag per block of the fine block grid, block-index order (bx fastest).
struct RoiMask {
  Dims grid{};
  std::vector<std::uint8_t> selected;

  std::size_t count() const;
  bool at(const BlockCoord& c) const { return selected[linear_index(grid, c.bx, c.by, c.bz)] != 0; }
  friend bool operator==(const RoiMask&, const RoiMask&) = default;
};

struct Level {
  Dims dims{};  // domain dims at this level's resolution
  std::uint32_t u = 0;
  std::vector<UnitBlock> blocks;  // sorted by (bz, by, bx)

  friend bool operator==(const Level&, const Level&) = default;
};

// Levels ordered fine -> coarse with refinement ratio 2. Every fine-domain
// cell is covered by exactly one block of exactly one level.
struct MultiResDataset {
  std::vector<Level> levels;
  RoiConfig roi{};
  RoiMask roi_mask;  // empty for ingested AMR data

  const Dims& domain() const { return levels.front().dims; }
  friend bool operator==(const MultiResDataset& a, const MultiResDataset& b) {
    return a.levels == b.levels && a.roi.block == b.roi.block && a.roi.percent == b.roi.percent &&
           a.roi_mask == b.roi_mask;
  }
};

// Marks ceil(percent/100 * nblocks) blocks with the largest value range; ties
// go to the lower block index.
RoiMask select_roi(const Volume& v, const RoiConfig& cfg);

// ROI blocks verbatim on the fine level (u = b); the rest downsampled 2x on
// the coarse level (u = b/2).
MultiResDataset build_adaptive(const Volume& v, const RoiMask& mask, const RoiConfig& cfg);

// Fine blocks copied, coarser blocks replicated (nearest) into their footprint.
Volume reconstruct_uniform(const MultiResDataset& ds);

struct AmrLevelInput {
  Dims dims{};
  std::uint32_t u = 0;
  std::vector<UnitBlock> blocks;
};

// Normalizes an externally produced hierarchy (sorts block lists) and checks
// that the levels tile the domain without overlap or gaps.
MultiResDataset ingest_amr(std::vector<AmrLevelInput> levels);

// Throws CoverageError on overlap, gaps, or blocks outside their level.
void validate_coverage(const MultiResDataset& ds);

// Fraction of the fine domain represented by each level.
std::vector<double> level_densities(const MultiResDataset& ds);

}  // namespace mrc
