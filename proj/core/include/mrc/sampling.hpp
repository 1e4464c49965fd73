#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mrc/grid.hpp"

namespace mrc {

// Block-level presence flags over a canvas (a level domain where only some
// unit blocks exist). Cells of absent blocks hold placeholder values.
struct BlockPresence {
  std::size_t block = 0;
  Dims grid{};
  std::vector<std::uint8_t> present;

  bool cell_present(std::size_t x, std::size_t y, std::size_t z) const {
    return present[linear_index(grid, x / block, y / block, z / block)] != 0;
  }
};

struct SampleRegion {
  Index3 origin;
  std::size_t edge = 0;
  friend bool operator==(const SampleRegion&, const SampleRegion&) = default;
};

// Cubic sample regions of edge multiplier * blocksize, block aligned, covering
// at most max_rate of the (present) cells.
struct SamplingPlan {
  std::size_t per_axis = 0;    // regions per axis for dense plans (i); 0 for presence plans
  std::size_t multiplier = 0;  // region edge in blocks (j)
  std::uint64_t seed = 0;
  std::vector<SampleRegion> regions;
  double achieved_rate = 0.0;
};

inline constexpr double kMaxSamplingRate = 0.05;

// Dense plan: i distinct region slots per axis chosen at random, i^3 regions.
// The multiplier in [2, 8] giving the most regions wins (ties: the larger one),
// spreading the budget over as many locations as possible.
// Throws SamplingError when no region fits under max_rate.
SamplingPlan make_sampling_plan(const Dims& dims, std::size_t blocksize, std::uint64_t seed,
                                double max_rate = kMaxSamplingRate);

// Presence-aware plan: regions restricted to fully present slots, same
// multiplier rule.
SamplingPlan make_sampling_plan(const Dims& dims, std::size_t blocksize, std::uint64_t seed,
                                const BlockPresence& presence, double max_rate = kMaxSamplingRate);

Volume extract_region(std::span<const double> values, const Dims& dims, const SampleRegion& r);
std::vector<Volume> extract_regions(std::span<const double> values, const Dims& dims,
                                    const std::vector<SampleRegion>& regions);

}  // namespace mrc
