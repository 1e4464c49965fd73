#include "mrc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrc/error.hpp"

namespace mrc {

namespace {

std::string dims_str(const Dims& d) {
  return std::to_string(d.nx) + "x" + std::to_string(d.ny) + "x" + std::to_string(d.nz);
}

}  // namespace

Volume::Volume(Dims dims, std::vector<double> values) : dims_(dims), values_(std::move(values)) {
  if (dims_.nx == 0 || dims_.ny == 0 || dims_.nz == 0) {
    throw ShapeError("volume dims must be positive, got " + dims_str(dims_));
  }
  if (values_.size() != dims_.count()) {
    throw ShapeError("volume " + dims_str(dims_) + " expects " + std::to_string(dims_.count()) +
                     " values, got " + std::to_string(values_.size()));
  }
  range_ = {values_.front(), values_.front()};
  for (const double v : values_) {
    if (!std::isfinite(v)) throw DataError("volume contains a non-finite value");
    range_.min = std::min(range_.min, v);
    range_.max = std::max(range_.max, v);
  }
}

Volume::Volume(Dims dims, double fill) : Volume(dims, std::vector<double>(dims.count(), fill)) {}

std::vector<double> Volume::release() && {
  dims_ = {};
  range_ = {};
  return std::move(values_);
}

Dims block_grid(const Dims& d, std::size_t block) {
  if (block == 0 || d.nx % block || d.ny % block || d.nz % block) {
    throw ShapeError("dims " + dims_str(d) + " are not divisible by block size " +
                     std::to_string(block));
  }
  return {d.nx / block, d.ny / block, d.nz / block};
}

namespace {

void check_block_inside(const Dims& d, const BlockCoord& c, std::size_t block) {
  if (block == 0 || (c.bx + 1) * block > d.nx || (c.by + 1) * block > d.ny ||
      (c.bz + 1) * block > d.nz) {
    throw BoundsError("block (" + std::to_string(c.bx) + "," + std::to_string(c.by) + "," +
                      std::to_string(c.bz) + ") of edge " + std::to_string(block) +
                      " lies outside " + dims_str(d));
  }
}

}  // namespace

ValueRange block_value_range(const Volume& v, const BlockCoord& c, std::size_t block) {
  check_block_inside(v.dims(), c, block);
  const std::size_t x0 = c.bx * block, y0 = c.by * block, z0 = c.bz * block;
  ValueRange r{v.at(x0, y0, z0), v.at(x0, y0, z0)};
  for (std::size_t z = z0; z < z0 + block; ++z) {
    for (std::size_t y = y0; y < y0 + block; ++y) {
      const double* row = v.values().data() + linear_index(v.dims(), x0, y, z);
      const auto [lo, hi] = std::minmax_element(row, row + block);
      r.min = std::min(r.min, *lo);
      r.max = std::max(r.max, *hi);
    }
  }
  return r;
}

std::vector<double> extract_block(const Volume& v, const BlockCoord& c, std::size_t block) {
  check_block_inside(v.dims(), c, block);
  std::vector<double> out(block * block * block);
  const std::size_t x0 = c.bx * block, y0 = c.by * block, z0 = c.bz * block;
  auto dst = out.begin();
  for (std::size_t z = z0; z < z0 + block; ++z) {
    for (std::size_t y = y0; y < y0 + block; ++y) {
      const double* row = v.values().data() + linear_index(v.dims(), x0, y, z);
      dst = std::copy(row, row + block, dst);
    }
  }
  return out;
}

std::vector<double> downsample2x(std::span<const double> values, const Dims& d) {
  if (d.nx % 2 || d.ny % 2 || d.nz % 2) {
    throw ShapeError("downsample2x needs even dims, got " + dims_str(d));
  }
  const Dims h{d.nx / 2, d.ny / 2, d.nz / 2};
  std::vector<double> out(h.count());
  for (std::size_t z = 0; z < h.nz; ++z) {
    for (std::size_t y = 0; y < h.ny; ++y) {
      for (std::size_t x = 0; x < h.nx; ++x) {
        // Pairwise halving: equal inputs reproduce their value exactly and
        // large magnitudes cannot overflow.
        auto mid = [](double a, double b) { return 0.5 * a + 0.5 * b; };
        auto at = [&](std::size_t i, std::size_t j, std::size_t k) {
          return values[linear_index(d, 2 * x + i, 2 * y + j, 2 * z + k)];
        };
        const double z0 = mid(mid(at(0, 0, 0), at(1, 0, 0)), mid(at(0, 1, 0), at(1, 1, 0)));
        const double z1 = mid(mid(at(0, 0, 1), at(1, 0, 1)), mid(at(0, 1, 1), at(1, 1, 1)));
        out[linear_index(h, x, y, z)] = mid(z0, z1);
      }
    }
  }
  return out;
}

std::vector<double> upsample(std::span<const double> values, const Dims& d, std::size_t factor) {
  const Dims u{d.nx * factor, d.ny * factor, d.nz * factor};
  std::vector<double> out(u.count());
  for (std::size_t z = 0; z < u.nz; ++z) {
    for (std::size_t y = 0; y < u.ny; ++y) {
      for (std::size_t x = 0; x < u.nx; ++x) {
        out[linear_index(u, x, y, z)] = values[linear_index(d, x / factor, y / factor, z / factor)];
      }
    }
  }
  return out;
}

Volume downsample2x(const Volume& v) {
  const Dims& d = v.dims();
  return Volume({d.nx / 2, d.ny / 2, d.nz / 2}, downsample2x(v.values(), d));
}

Volume upsample2x(const Volume& v) {
  const Dims& d = v.dims();
  return Volume({d.nx * 2, d.ny * 2, d.nz * 2}, upsample(v.values(), d, 2));
}

}  // namespace mrc
