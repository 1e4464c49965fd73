#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mrc/grid.hpp"

namespace mrc {

enum class PredictorKind : std::uint8_t {
  seed_zero,         // first point, predicted from 0
  endpoint,          // last point, predicted from the first
  interp_two_sided,  // mean of the two stride neighbours
  extrap_one_sided,  // copy of the left stride neighbour (right one is missing)
};

struct ScheduleTarget {
  std::size_t index;  // 0-based position along the axis
  PredictorKind kind;
};

struct ScheduleLevel {
  unsigned level;
  std::size_t stride;  // 0 for the seed and endpoint levels
  std::vector<ScheduleTarget> targets;
};

// Prediction order for one axis of n points. Strides are powers of two
// strictly below n - 1, visited in decreasing order after the seed and
// endpoint levels.
struct InterpolationSchedule {
  std::size_t n_points = 0;
  unsigned maxlevel = 0;
  std::vector<ScheduleLevel> levels;

  // 0-based indices, excluding the two ends, that fall back to one-sided
  // extrapolation.
  std::vector<std::size_t> inner_one_sided() const;
};

InterpolationSchedule build_schedule(std::size_t n);

// Exponent of the largest power of two strictly below n - 1, or -1 if none.
int largest_stride_exponent(std::size_t n);

// Global level count for a 3D array: levels are aligned so the unit stride is
// the last level on every axis.
unsigned schedule_maxlevel(const Dims& d);

// Visits every point of a 3D array exactly once in prediction order.
// Within each level the x, y and z passes run in that order; a pass along an
// axis predicts the new points of that axis over the points already known on
// the other two axes. visit(level, target, kind, left, right) receives linear
// indices; `left`/`right` are only meaningful for the kinds that read them.
template <class Visit>
void for_each_prediction(const Dims& d, Visit&& visit) {
  if (d.count() == 0) return;
  const std::size_t n[3] = {d.nx, d.ny, d.nz};
  const std::size_t step[3] = {1, d.nx, d.nx * d.ny};
  std::vector<std::size_t> known[3] = {{0}, {0}, {0}};

  // Runs one pass along `axis` for the given target positions.
  auto pass = [&](unsigned level, int axis, const std::vector<std::size_t>& targets, std::size_t stride) {
    const std::vector<std::size_t>& xs = axis == 0 ? targets : known[0];
    const std::vector<std::size_t>& ys = axis == 1 ? targets : known[1];
    const std::vector<std::size_t>& zs = axis == 2 ? targets : known[2];
    const std::size_t last = n[axis] - 1;
    for (const std::size_t z : zs)
      for (const std::size_t y : ys)
        for (const std::size_t x : xs) {
          const std::size_t idx = x + d.nx * (y + d.ny * z);
          const std::size_t t = axis == 0 ? x : (axis == 1 ? y : z);
          if (stride == 0) {
            visit(level, idx, PredictorKind::endpoint, idx - t * step[axis], idx);
          } else if (t + stride <= last) {
            visit(level, idx, PredictorKind::interp_two_sided, idx - stride * step[axis],
                  idx + stride * step[axis]);
          } else {
            visit(level, idx, PredictorKind::extrap_one_sided, idx - stride * step[axis], idx);
          }
        }
  };
  auto merge_known = [&](int axis, const std::vector<std::size_t>& targets) {
    std::vector<std::size_t> merged;
    merged.reserve(known[axis].size() + targets.size());
    std::size_t i = 0, j = 0;
    while (i < known[axis].size() || j < targets.size()) {
      if (j == targets.size() || (i < known[axis].size() && known[axis][i] < targets[j])) {
        merged.push_back(known[axis][i++]);
      } else {
        merged.push_back(targets[j++]);
      }
    }
    known[axis] = std::move(merged);
  };

  visit(0u, std::size_t{0}, PredictorKind::seed_zero, std::size_t{0}, std::size_t{0});

  for (int axis = 0; axis < 3; ++axis) {
    if (n[axis] < 2) continue;
    const std::vector<std::size_t> ends{n[axis] - 1};
    pass(1u, axis, ends, 0);
    merge_known(axis, ends);
  }

  int emax = -1;
  for (int axis = 0; axis < 3; ++axis) emax = std::max(emax, largest_stride_exponent(n[axis]));
  for (int e = emax; e >= 0; --e) {
    const std::size_t stride = std::size_t{1} << e;
    const unsigned level = static_cast<unsigned>(2 + emax - e);
    for (int axis = 0; axis < 3; ++axis) {
      if (n[axis] < 2 || stride >= n[axis] - 1) continue;
      std::vector<std::size_t> targets;
      for (std::size_t t = stride; t < n[axis] - 1; t += 2 * stride) targets.push_back(t);
      pass(level, axis, targets, stride);
      merge_known(axis, targets);
    }
  }
}

}  // namespace mrc
