#include "mrc/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mrc/error.hpp"
#include "mrc/parallel.hpp"

namespace mrc {

std::vector<double> sample_errors(std::span<const double> orig, std::span<const double> decomp) {
  if (orig.size() != decomp.size()) throw ShapeError("sample shapes differ");
  std::vector<double> out(orig.size());
  for (std::size_t i = 0; i < orig.size(); ++i) out[i] = orig[i] - decomp[i];
  return out;
}

std::vector<double> sample_errors(const std::vector<Volume>& orig, const std::vector<Volume>& decomp) {
  if (orig.size() != decomp.size()) throw ShapeError("sample region counts differ");
  std::vector<double> out;
  for (std::size_t r = 0; r < orig.size(); ++r) {
    if (orig[r].dims() != decomp[r].dims()) throw ShapeError("sample region shapes differ");
    const auto e = sample_errors(orig[r].values(), decomp[r].values());
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

namespace {

ErrorModel moments(const std::vector<double>& e) {
  // Shifted by the first sample so equal errors give exactly (c, 0).
  ErrorModel m;
  m.n_samples = e.size();
  const double n = static_cast<double>(e.size());
  std::vector<double> d(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) d[i] = e[i] - e.front();
  const double mean_d = pairwise_sum(d.data(), d.size()) / n;
  for (double& x : d) x = (x - mean_d) * (x - mean_d);
  m.mu = e.front() + mean_d;
  m.sigma2 = pairwise_sum(d.data(), d.size()) / (n - 1.0);
  return m;
}

}  // namespace

ErrorModel fit_model(std::span<const double> errors, std::span<const double> values, double isovalue, double window) {
  if (errors.size() != values.size()) throw ShapeError("errors and values differ in length");
  if (errors.size() < 2) throw SamplingError("an error model needs at least two samples");
  if (!(window >= 0.0) || !std::isfinite(window)) throw DataError("window must be non-negative");

  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;

  double w = window;
  for (int attempt = 0; attempt <= 4; ++attempt, w *= 2.0) {
    std::vector<double> picked;
    const double half = w * range;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] >= isovalue - half && values[i] <= isovalue + half) picked.push_back(errors[i]);
    }
    if (picked.size() >= 2) {
      ErrorModel m = moments(picked);
      m.isovalue = isovalue;
      m.window = w;
      return m;
    }
  }
  ErrorModel m = moments({errors.begin(), errors.end()});
  m.isovalue = isovalue;
  m.window = w / 2.0;
  m.fallback = true;
  return m;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double cell_crossing_probability(std::span<const double, 8> corners, double isovalue, const ErrorModel& model) {
  if (!(model.sigma2 >= 0.0)) throw DataError("error variance must be non-negative");
  const double sigma = std::sqrt(model.sigma2);
  double all_below = 1.0;
  double all_above = 1.0;
  for (const double v : corners) {
    const double mean = v + model.mu;
    const double q = sigma > 0.0 ? normal_cdf((isovalue - mean) / sigma) : (mean < isovalue ? 1.0 : 0.0);
    all_below *= q;
    all_above *= 1.0 - q;
  }
  return std::clamp(1.0 - all_below - all_above, 0.0, 1.0);
}

bool cell_crosses(std::span<const double, 8> corners, double isovalue) {
  bool below = false, above = false;
  for (const double v : corners) (v < isovalue ? below : above) = true;
  return below && above;
}

std::array<double, 8> cell_corners(const Volume& v, std::size_t x, std::size_t y, std::size_t z) {
  return {v.at(x, y, z),         v.at(x + 1, y, z),         v.at(x, y + 1, z),         v.at(x + 1, y + 1, z),
          v.at(x, y, z + 1),     v.at(x + 1, y, z + 1),     v.at(x, y + 1, z + 1),     v.at(x + 1, y + 1, z + 1)};
}

ProbabilityField probability_field(const Volume& decomp, double isovalue, const ErrorModel& model) {
  const Dims& d = decomp.dims();
  if (d.nx < 2 || d.ny < 2 || d.nz < 2) throw ShapeError("probability field needs at least 2 points per axis");
  ProbabilityField f;
  f.dims = {d.nx - 1, d.ny - 1, d.nz - 1};
  f.p.resize(f.dims.count());
  parallel_for(f.dims.nz, [&](std::size_t z) {
    for (std::size_t y = 0; y < f.dims.ny; ++y)
      for (std::size_t x = 0; x < f.dims.nx; ++x) {
        const auto c = cell_corners(decomp, x, y, z);
        f.p[linear_index(f.dims, x, y, z)] = cell_crossing_probability(c, isovalue, model);
      }
  });
  return f;
}

}  // namespace mrc
