#include "mrc/roi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mrc/error.hpp"
#include "mrc/parallel.hpp"

namespace mrc {

void RoiConfig::validate() const {
  if (!is_power_of_two(block) || block < 8) {
    throw ShapeError("ROI block edge must be a power of two >= 8, got " + std::to_string(block));
  }
  if (!(percent > 0.0 && percent <= 100.0)) {
    throw ShapeError("ROI percent must lie in (0, 100], got " + std::to_string(percent));
  }
}

std::size_t RoiMask::count() const {
  return static_cast<std::size_t>(std::count(selected.begin(), selected.end(), std::uint8_t{1}));
}

namespace {

BlockCoord block_at(const Dims& grid, std::size_t i) {
  const Index3 p = unlinear_index(grid, i);
  return {static_cast<std::uint32_t>(p.x), static_cast<std::uint32_t>(p.y),
          static_cast<std::uint32_t>(p.z)};
}

}  // namespace

RoiMask select_roi(const Volume& v, const RoiConfig& cfg) {
  cfg.validate();
  const Dims grid = block_grid(v.dims(), cfg.block);
  const std::size_t n = grid.count();

  std::vector<double> ranges(n);
  parallel_for(n, [&](std::size_t i) {
    ranges[i] = block_value_range(v, block_at(grid, i), cfg.block).span();
  });

  // The small epsilon keeps e.g. 15% of 20 blocks at exactly 3 despite rounding.
  const auto quota = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::ceil(cfg.percent * static_cast<double>(n) / 100.0 - 1e-9)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ranges[a] > ranges[b]; });

  RoiMask mask{grid, std::vector<std::uint8_t>(n, 0)};
  for (std::size_t k = 0; k < quota; ++k) mask.selected[order[k]] = 1;
  return mask;
}

MultiResDataset build_adaptive(const Volume& v, const RoiMask& mask, const RoiConfig& cfg) {
  cfg.validate();
  const Dims grid = block_grid(v.dims(), cfg.block);
  if (mask.grid != grid || mask.selected.size() != grid.count()) {
    throw ShapeError("ROI mask does not match the volume's block grid");
  }
  const std::uint32_t b = cfg.block;
  const std::uint32_t half = b / 2;
  const Dims block_dims{b, b, b};

  MultiResDataset ds;
  ds.roi = cfg;
  ds.roi_mask = mask;
  ds.levels.resize(2);
  ds.levels[0].dims = v.dims();
  ds.levels[0].u = b;
  ds.levels[1].dims = {v.dims().nx / 2, v.dims().ny / 2, v.dims().nz / 2};
  ds.levels[1].u = half;

  // Block index order already is (bz, by, bx) ascending.
  for (std::size_t i = 0; i < grid.count(); ++i) {
    const BlockCoord c = block_at(grid, i);
    std::vector<double> data = extract_block(v, c, b);
    if (mask.selected[i]) {
      ds.levels[0].blocks.push_back({c, b, std::move(data)});
    } else {
      ds.levels[1].blocks.push_back({c, half, downsample2x(data, block_dims)});
    }
  }
  return ds;
}

namespace {

struct Footprint {
  std::size_t x0, y0, z0, edge;
};

Footprint footprint(const BlockCoord& c, std::uint32_t u, std::size_t level) {
  const std::size_t edge = static_cast<std::size_t>(u) << level;
  return {c.bx * edge, c.by * edge, c.bz * edge, edge};
}

}  // namespace

void validate_coverage(const MultiResDataset& ds) {
  if (ds.levels.empty()) throw CoverageError("dataset has no levels");
  const Dims domain = ds.domain();
  if (domain.count() == 0) throw CoverageError("dataset domain is empty");

  std::size_t granule = 0;
  for (std::size_t k = 0; k < ds.levels.size(); ++k) {
    const Level& lvl = ds.levels[k];
    const std::size_t f = std::size_t{1} << k;
    if (lvl.dims != Dims{domain.nx / f, domain.ny / f, domain.nz / f} || domain.nx % f ||
        domain.ny % f || domain.nz % f) {
      throw CoverageError("level " + std::to_string(k) + " dims do not match a 2^" +
                          std::to_string(k) + " coarsening of the domain");
    }
    if (lvl.blocks.empty()) continue;
    if (!is_power_of_two(lvl.u)) {
      throw CoverageError("level " + std::to_string(k) + " unit size is not a power of two");
    }
    const std::size_t edge = static_cast<std::size_t>(lvl.u) << k;
    granule = granule == 0 ? edge : std::min(granule, edge);
  }
  if (granule == 0) throw CoverageError("dataset holds no blocks");
  if (domain.nx % granule || domain.ny % granule || domain.nz % granule) {
    throw CoverageError("domain is not divisible by the smallest block footprint");
  }

  const Dims cells{domain.nx / granule, domain.ny / granule, domain.nz / granule};
  std::vector<std::uint8_t> hits(cells.count(), 0);
  for (std::size_t k = 0; k < ds.levels.size(); ++k) {
    const Level& lvl = ds.levels[k];
    for (std::size_t i = 0; i < lvl.blocks.size(); ++i) {
      const UnitBlock& blk = lvl.blocks[i];
      if (blk.u != lvl.u || blk.data.size() != std::size_t{blk.u} * blk.u * blk.u) {
        throw CoverageError("level " + std::to_string(k) + " holds a block of the wrong size");
      }
      if (i > 0 && !(lvl.blocks[i - 1].coord < blk.coord)) {
        throw CoverageError("level " + std::to_string(k) + " block list is not strictly sorted");
      }
      const Footprint fp = footprint(blk.coord, lvl.u, k);
      if (fp.x0 + fp.edge > domain.nx || fp.y0 + fp.edge > domain.ny ||
          fp.z0 + fp.edge > domain.nz) {
        throw CoverageError("level " + std::to_string(k) + " block lies outside the domain");
      }
      const std::size_t n = fp.edge / granule;
      for (std::size_t z = fp.z0 / granule; z < fp.z0 / granule + n; ++z)
        for (std::size_t y = fp.y0 / granule; y < fp.y0 / granule + n; ++y)
          for (std::size_t x = fp.x0 / granule; x < fp.x0 / granule + n; ++x) {
            std::uint8_t& h = hits[linear_index(cells, x, y, z)];
            if (h) throw CoverageError("levels overlap");
            h = 1;
          }
    }
  }
  if (std::find(hits.begin(), hits.end(), std::uint8_t{0}) != hits.end()) {
    throw CoverageError("levels leave part of the domain uncovered");
  }
}

Volume reconstruct_uniform(const MultiResDataset& ds) {
  validate_coverage(ds);
  const Dims domain = ds.domain();
  std::vector<double> out(domain.count());
  for (std::size_t k = 0; k < ds.levels.size(); ++k) {
    const Level& lvl = ds.levels[k];
    const std::size_t factor = std::size_t{1} << k;
    const Dims ud{lvl.u, lvl.u, lvl.u};
    parallel_for(lvl.blocks.size(), [&](std::size_t i) {
      const UnitBlock& blk = lvl.blocks[i];
      const Footprint fp = footprint(blk.coord, lvl.u, k);
      const std::vector<double> fine =
          factor == 1 ? blk.data : upsample(blk.data, ud, factor);
      for (std::size_t z = 0; z < fp.edge; ++z)
        for (std::size_t y = 0; y < fp.edge; ++y) {
          const double* src = fine.data() + fp.edge * (y + fp.edge * z);
          std::copy(src, src + fp.edge,
                    out.begin() + static_cast<std::ptrdiff_t>(
                                      linear_index(domain, fp.x0, fp.y0 + y, fp.z0 + z)));
        }
    });
  }
  return Volume(domain, std::move(out));
}

MultiResDataset ingest_amr(std::vector<AmrLevelInput> levels) {
  if (levels.empty()) throw CoverageError("AMR hierarchy has no levels");
  MultiResDataset ds;
  ds.roi = {0, 100.0};
  for (auto& in : levels) {
    std::sort(in.blocks.begin(), in.blocks.end(),
              [](const UnitBlock& a, const UnitBlock& b) { return a.coord < b.coord; });
    ds.levels.push_back({in.dims, in.u, std::move(in.blocks)});
  }
  validate_coverage(ds);
  return ds;
}

std::vector<double> level_densities(const MultiResDataset& ds) {
  const double total = static_cast<double>(ds.domain().count());
  std::vector<double> out;
  for (std::size_t k = 0; k < ds.levels.size(); ++k) {
    const double edge = static_cast<double>(std::size_t{ds.levels[k].u} << k);
    out.push_back(static_cast<double>(ds.levels[k].blocks.size()) * edge * edge * edge / total);
  }
  return out;
}

}  // namespace mrc
