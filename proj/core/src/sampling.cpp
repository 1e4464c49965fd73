#include "mrc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mrc/error.hpp"

namespace mrc {

namespace {

constexpr std::size_t kMinMultiplier = 2;
constexpr std::size_t kMaxMultiplier = 8;

std::vector<std::size_t> pick(std::size_t slots, std::size_t count, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(slots);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

void check_args(std::size_t blocksize, double max_rate) {
  if (blocksize == 0) throw SamplingError("sampling block size must be positive");
  if (!(max_rate > 0.0 && max_rate <= kMaxSamplingRate)) {
    throw SamplingError("sampling rate must lie in (0, 0.05]");
  }
}

}  // namespace

SamplingPlan make_sampling_plan(const Dims& dims, std::size_t blocksize, std::uint64_t seed, double max_rate) {
  check_args(blocksize, max_rate);
  const double budget = max_rate * static_cast<double>(dims.count());

  std::size_t best_j = 0, best_i = 0;
  for (std::size_t j = kMinMultiplier; j <= kMaxMultiplier; ++j) {
    const std::size_t edge = j * blocksize;
    const std::size_t slots = std::min({dims.nx / edge, dims.ny / edge, dims.nz / edge});
    const double cube = static_cast<double>(edge) * static_cast<double>(edge) * static_cast<double>(edge);
    std::size_t i = 0;
    while (i < slots && static_cast<double>((i + 1) * (i + 1) * (i + 1)) * cube <= budget) ++i;
    if (i > 0 && i >= best_i) {
      best_j = j;
      best_i = i;
    }
  }
  if (best_i == 0) throw SamplingError("volume too small to sample under the rate cap");

  const std::size_t edge = best_j * blocksize;
  std::mt19937_64 rng(seed);
  const auto xs = pick(dims.nx / edge, best_i, rng);
  const auto ys = pick(dims.ny / edge, best_i, rng);
  const auto zs = pick(dims.nz / edge, best_i, rng);

  SamplingPlan plan;
  plan.per_axis = best_i;
  plan.multiplier = best_j;
  plan.seed = seed;
  for (const std::size_t z : zs)
    for (const std::size_t y : ys)
      for (const std::size_t x : xs) plan.regions.push_back({{x * edge, y * edge, z * edge}, edge});
  plan.achieved_rate = static_cast<double>(plan.regions.size() * edge * edge * edge) /
                       static_cast<double>(dims.count());
  return plan;
}

SamplingPlan make_sampling_plan(const Dims& dims, std::size_t blocksize, std::uint64_t seed,
                                const BlockPresence& presence, double max_rate) {
  check_args(blocksize, max_rate);
  if (presence.block == 0 || presence.present.size() != presence.grid.count()) {
    throw SamplingError("malformed block presence mask");
  }
  std::size_t present_cells = 0;
  const std::size_t pb = presence.block;
  for (const auto p : presence.present) present_cells += p ? pb * pb * pb : 0;
  const double budget = max_rate * static_cast<double>(present_cells);

  std::size_t best_j = 0;
  std::vector<SampleRegion> best_candidates;
  std::size_t best_count = 0;
  for (std::size_t j = kMinMultiplier; j <= kMaxMultiplier; ++j) {
    const std::size_t edge = j * blocksize;
    const double cube = static_cast<double>(edge) * static_cast<double>(edge) * static_cast<double>(edge);
    const auto allowed = static_cast<std::size_t>(std::floor(budget / cube));
    if (allowed == 0) continue;
    std::vector<SampleRegion> candidates;
    for (std::size_t z = 0; z + edge <= dims.nz; z += edge)
      for (std::size_t y = 0; y + edge <= dims.ny; y += edge)
        for (std::size_t x = 0; x + edge <= dims.nx; x += edge) {
          bool full = true;
          for (std::size_t bz = z / pb; bz <= (z + edge - 1) / pb && full; ++bz)
            for (std::size_t by = y / pb; by <= (y + edge - 1) / pb && full; ++by)
              for (std::size_t bx = x / pb; bx <= (x + edge - 1) / pb && full; ++bx)
                full = presence.present[linear_index(presence.grid, bx, by, bz)] != 0;
          if (full) candidates.push_back({{x, y, z}, edge});
        }
    const std::size_t count = std::min(allowed, candidates.size());
    if (count > 0 && count >= best_count) {
      best_j = j;
      best_count = count;
      best_candidates = std::move(candidates);
    }
  }
  if (best_count == 0) throw SamplingError("no fully present region fits under the rate cap");

  std::mt19937_64 rng(seed);
  const auto chosen = pick(best_candidates.size(), best_count, rng);
  SamplingPlan plan;
  plan.multiplier = best_j;
  plan.seed = seed;
  for (const std::size_t k : chosen) plan.regions.push_back(best_candidates[k]);
  const std::size_t edge = best_j * blocksize;
  plan.achieved_rate = static_cast<double>(plan.regions.size() * edge * edge * edge) /
                       static_cast<double>(dims.count());
  return plan;
}

Volume extract_region(std::span<const double> values, const Dims& dims, const SampleRegion& r) {
  if (r.edge == 0 || r.origin.x + r.edge > dims.nx || r.origin.y + r.edge > dims.ny ||
      r.origin.z + r.edge > dims.nz) {
    throw BoundsError("sample region lies outside the array");
  }
  std::vector<double> out;
  out.reserve(r.edge * r.edge * r.edge);
  for (std::size_t z = 0; z < r.edge; ++z)
    for (std::size_t y = 0; y < r.edge; ++y) {
      const auto row = values.begin() + static_cast<std::ptrdiff_t>(
                                            linear_index(dims, r.origin.x, r.origin.y + y, r.origin.z + z));
      out.insert(out.end(), row, row + static_cast<std::ptrdiff_t>(r.edge));
    }
  return Volume({r.edge, r.edge, r.edge}, std::move(out));
}

std::vector<Volume> extract_regions(std::span<const double> values, const Dims& dims,
                                    const std::vector<SampleRegion>& regions) {
  std::vector<Volume> out;
  out.reserve(regions.size());
  for (const SampleRegion& r : regions) out.push_back(extract_region(values, dims, r));
  return out;
}

}  // namespace mrc
