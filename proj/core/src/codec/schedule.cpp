#include "mrc/codec/schedule.hpp"

#include <algorithm>

namespace mrc {

int largest_stride_exponent(std::size_t n) {
  if (n < 3) return -1;
  int e = 0;
  while ((std::size_t{2} << e) < n - 1) ++e;
  return e;
}

InterpolationSchedule build_schedule(std::size_t n) {
  InterpolationSchedule s;
  s.n_points = n;
  if (n == 0) return s;
  s.levels.push_back({0, 0, {{0, PredictorKind::seed_zero}}});
  if (n >= 2) s.levels.push_back({1, 0, {{n - 1, PredictorKind::endpoint}}});
  const int emax = largest_stride_exponent(n);
  for (int e = emax; e >= 0; --e) {
    const std::size_t stride = std::size_t{1} << e;
    ScheduleLevel lvl{static_cast<unsigned>(2 + emax - e), stride, {}};
    for (std::size_t t = stride; t < n - 1; t += 2 * stride) {
      lvl.targets.push_back(
          {t, t + stride <= n - 1 ? PredictorKind::interp_two_sided : PredictorKind::extrap_one_sided});
    }
    s.levels.push_back(std::move(lvl));
  }
  s.maxlevel = s.levels.back().level;
  return s;
}

std::vector<std::size_t> InterpolationSchedule::inner_one_sided() const {
  std::vector<std::size_t> out;
  for (const ScheduleLevel& lvl : levels)
    for (const ScheduleTarget& t : lvl.targets)
      if (t.kind == PredictorKind::extrap_one_sided && t.index != 0 && t.index + 1 != n_points)
        out.push_back(t.index);
  std::sort(out.begin(), out.end());
  return out;
}

unsigned schedule_maxlevel(const Dims& d) {
  int emax = -1;
  bool any_two = false;
  for (std::size_t axis = 0; axis < 3; ++axis) {
    emax = std::max(emax, largest_stride_exponent(d[axis]));
    any_two = any_two || d[axis] >= 2;
  }
  if (emax >= 0) return static_cast<unsigned>(2 + emax);
  return any_two ? 1u : 0u;
}

}  // namespace mrc
