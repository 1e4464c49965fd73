#include "mrc/layout.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "mrc/error.hpp"

namespace mrc {

namespace {

std::uint32_t common_unit(const std::vector<UnitBlock>& blocks) {
  if (blocks.empty()) throw ShapeError("cannot merge an empty block list");
  const std::uint32_t u = blocks.front().u;
  if (u == 0) throw ShapeError("unit block edge must be positive");
  const std::size_t cube = std::size_t{u} * u * u;
  for (const UnitBlock& b : blocks) {
    if (b.u != u) {
      throw ShapeError("mixed unit sizes " + std::to_string(u) + " and " + std::to_string(b.u));
    }
    if (b.data.size() != cube) throw ShapeError("unit block payload is not u^3 values");
  }
  return u;
}

// Copies a u³ block into (or out of) the merged array at cell offset (x0, y0, z0).
void place(const std::vector<double>& block, std::uint32_t u, std::vector<double>& dst,
           const Dims& d, std::size_t x0, std::size_t y0, std::size_t z0) {
  for (std::size_t z = 0; z < u; ++z)
    for (std::size_t y = 0; y < u; ++y) {
      const auto src = block.begin() + static_cast<std::ptrdiff_t>(u * (y + u * z));
      std::copy(src, src + u,
                dst.begin() + static_cast<std::ptrdiff_t>(linear_index(d, x0, y0 + y, z0 + z)));
    }
}

std::vector<double> take(const std::vector<double>& src, const Dims& d, std::uint32_t u,
                         std::size_t x0, std::size_t y0, std::size_t z0) {
  std::vector<double> out(std::size_t{u} * u * u);
  auto dst = out.begin();
  for (std::size_t z = 0; z < u; ++z)
    for (std::size_t y = 0; y < u; ++y) {
      const auto row = src.begin() + static_cast<std::ptrdiff_t>(linear_index(d, x0, y0 + y, z0 + z));
      dst = std::copy(row, row + u, dst);
    }
  return out;
}

}  // namespace

MergedArray linear_merge(const std::vector<UnitBlock>& blocks) {
  const std::uint32_t u = common_unit(blocks);
  MergedArray m;
  m.u = u;
  m.arrangement = Arrangement::linear;
  m.dims = {u, u, std::size_t{u} * blocks.size()};
  m.values.reserve(m.dims.count());
  for (const UnitBlock& b : blocks) {
    m.values.insert(m.values.end(), b.data.begin(), b.data.end());
    m.order.push_back(b.coord);
  }
  return m;
}

Dims stack_grid(std::size_t k) {
  if (k == 0) throw ShapeError("cannot stack zero blocks");
  std::size_t side = 1;
  while (side * side * side < k) ++side;
  Dims best{side, side, side};
  // With max(g) fixed at `side`, search the smallest slot count.
  for (std::size_t gz = 1; gz <= side; ++gz)
    for (std::size_t gy = 1; gy <= side; ++gy)
      for (std::size_t gx = 1; gx <= side; ++gx) {
        const std::size_t slots = gx * gy * gz;
        if (slots < k || std::max({gx, gy, gz}) != side) continue;
        if (slots < best.count()) best = {gx, gy, gz};
      }
  return best;
}

MergedArray stack_merge(const std::vector<UnitBlock>& blocks) {
  const std::uint32_t u = common_unit(blocks);
  const Dims g = stack_grid(blocks.size());
  MergedArray m;
  m.u = u;
  m.arrangement = Arrangement::stacked;
  m.dims = {g.nx * u, g.ny * u, g.nz * u};

  const std::vector<double>& last = blocks.back().data;
  const double filler = std::accumulate(last.begin(), last.end(), 0.0) / static_cast<double>(last.size());
  m.values.assign(m.dims.count(), filler);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Index3 s = unlinear_index(g, i);
    place(blocks[i].data, u, m.values, m.dims, s.x * u, s.y * u, s.z * u);
    m.order.push_back(blocks[i].coord);
  }
  return m;
}

std::vector<UnitBlock> unmerge(const MergedArray& m) {
  if (m.padded) throw StateError("unmerge requires an unpadded array");
  if (m.u == 0 || m.values.size() != m.dims.count()) throw ShapeError("malformed merged array");
  const std::uint32_t u = m.u;
  std::vector<UnitBlock> out;
  out.reserve(m.order.size());
  if (m.arrangement == Arrangement::linear) {
    if (m.dims != Dims{u, u, std::size_t{u} * m.order.size()}) {
      throw ShapeError("linear merged array dims do not match its block count");
    }
    const std::size_t cube = std::size_t{u} * u * u;
    for (std::size_t i = 0; i < m.order.size(); ++i) {
      const auto first = m.values.begin() + static_cast<std::ptrdiff_t>(i * cube);
      out.push_back({m.order[i], u, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(cube))});
    }
  } else if (m.arrangement == Arrangement::stacked) {
    const Dims g = block_grid(m.dims, u);
    if (g.count() < m.order.size()) throw ShapeError("stacked array has fewer slots than blocks");
    for (std::size_t i = 0; i < m.order.size(); ++i) {
      const Index3 s = unlinear_index(g, i);
      out.push_back({m.order[i], u, take(m.values, m.dims, u, s.x * u, s.y * u, s.z * u)});
    }
  } else {
    throw StateError("array carries no block arrangement");
  }
  return out;
}

MergedArray pad_linear_forced(const MergedArray& m) {
  if (m.arrangement != Arrangement::linear) throw StateError("padding applies to linear merges only");
  if (m.padded) throw StateError("array is already padded");
  const Dims in = m.dims;
  const Dims out{in.nx + 1, in.ny + 1, in.nz};

  MergedArray p;
  p.u = m.u;
  p.arrangement = m.arrangement;
  p.order = m.order;
  p.padded = true;
  p.dims = out;
  p.values.assign(out.count(), 0.0);

  auto extrapolate = [](double last, double before_last, std::size_t n) {
    return n >= 2 ? 2.0 * last - before_last : last;
  };
  for (std::size_t z = 0; z < out.nz; ++z) {
    for (std::size_t y = 0; y < in.ny; ++y) {
      const double* src = m.values.data() + linear_index(in, 0, y, z);
      double* dst = p.values.data() + linear_index(out, 0, y, z);
      std::copy(src, src + in.nx, dst);
      dst[in.nx] = extrapolate(src[in.nx - 1], in.nx >= 2 ? src[in.nx - 2] : 0.0, in.nx);
    }
    for (std::size_t x = 0; x < out.nx; ++x) {
      const double last = p.values[linear_index(out, x, in.ny - 1, z)];
      const double before = in.ny >= 2 ? p.values[linear_index(out, x, in.ny - 2, z)] : 0.0;
      p.values[linear_index(out, x, in.ny, z)] = extrapolate(last, before, in.ny);
    }
  }
  return p;
}

MergedArray pad_linear(const MergedArray& m) {
  if (m.arrangement != Arrangement::linear) throw StateError("padding applies to linear merges only");
  if (!padding_applies(m.u)) {
    MergedArray same = m;
    same.padded = false;
    return same;
  }
  return pad_linear_forced(m);
}

MergedArray unpad(const MergedArray& m) {
  if (!m.padded) throw StateError("unpad called on an unpadded array");
  if (m.dims.nx < 2 || m.dims.ny < 2) throw ShapeError("padded array is too small");
  const Dims in = m.dims;
  const Dims out{in.nx - 1, in.ny - 1, in.nz};
  MergedArray r;
  r.u = m.u;
  r.arrangement = m.arrangement;
  r.order = m.order;
  r.padded = false;
  r.dims = out;
  r.values.resize(out.count());
  for (std::size_t z = 0; z < out.nz; ++z)
    for (std::size_t y = 0; y < out.ny; ++y) {
      const double* src = m.values.data() + linear_index(in, 0, y, z);
      std::copy(src, src + out.nx, r.values.data() + linear_index(out, 0, y, z));
    }
  return r;
}

}  // namespace mrc
