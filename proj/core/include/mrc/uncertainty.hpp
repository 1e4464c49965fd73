#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mrc/grid.hpp"

namespace mrc {

// Normal model of the compression error (orig - decomp) near one isovalue.
struct ErrorModel {
  double mu = 0.0;
  double sigma2 = 0.0;
  double isovalue = 0.0;
  double window = 0.05;  // half-width as a fraction of the sample value range
  std::size_t n_samples = 0;
  bool fallback = false;  // window never held two samples; fitted on everything
};

inline constexpr double kDefaultWindow = 0.05;

// Pointwise orig - decomp. Throws ShapeError on mismatched shapes.
std::vector<double> sample_errors(std::span<const double> orig, std::span<const double> decomp);
std::vector<double> sample_errors(const std::vector<Volume>& orig, const std::vector<Volume>& decomp);

// Mean and unbiased variance of the errors whose value lies within
// window * range(values) of the isovalue. The window doubles up to four times
// when it holds fewer than two samples; after that all samples are used and
// `fallback` is set. Throws SamplingError with fewer than two samples overall.
ErrorModel fit_model(std::span<const double> errors, std::span<const double> values, double isovalue,
                     double window = kDefaultWindow);

double normal_cdf(double x);

// Probability that the isosurface crosses a cell whose corner values are
// independent Normal(v_i + mu, sigma2): 1 - prod(q_i) - prod(1 - q_i) with
// q_i = P(value_i < isovalue). sigma2 == 0 gives the marching-cubes indicator.
double cell_crossing_probability(std::span<const double, 8> corners, double isovalue, const ErrorModel& model);

// Deterministic marching-cubes crossing test (some corner below, some not).
bool cell_crosses(std::span<const double, 8> corners, double isovalue);

// Cell-centred field of (nx-1)(ny-1)(nz-1) probabilities.
struct ProbabilityField {
  Dims dims{};
  std::vector<double> p;
};

// Corner order: (0,0,0) (1,0,0) (0,1,0) (1,1,0) (0,0,1) (1,0,1) (0,1,1) (1,1,1).
std::array<double, 8> cell_corners(const Volume& v, std::size_t x, std::size_t y, std::size_t z);

// Throws ShapeError when any dim is below 2.
ProbabilityField probability_field(const Volume& decomp, double isovalue, const ErrorModel& model);

}  // namespace mrc
