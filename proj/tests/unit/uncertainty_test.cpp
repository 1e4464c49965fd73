#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fields.hpp"
#include "mrc/error.hpp"
#include "mrc/uncertainty.hpp"

namespace mrc {
namespace {

using testing::sphere_field;
using testing::uniform_noise;

TEST(SampleErrors, IdenticalInputsGiveZeros) {
  const Volume v = uniform_noise({4, 4, 4}, 1);
  for (double e : sample_errors(v.values(), v.values())) EXPECT_EQ(e, 0.0);
}

TEST(SampleErrors, ConstantShift) {
  const std::vector<double> orig{1.0, 2.0, 3.0}, dec{0.75, 1.75, 2.75};
  for (double e : sample_errors(orig, dec)) EXPECT_EQ(e, 0.25);
}

TEST(SampleErrors, MatchesElementwiseSubtraction) {
  const Volume a = uniform_noise({5, 5, 5}, 2), b = uniform_noise({5, 5, 5}, 3);
  const auto e = sample_errors({a}, {b});
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(e[i], a[i] - b[i]);
  EXPECT_THROW(sample_errors({a}, {uniform_noise({5, 5, 4}, 3)}), ShapeError);
}

TEST(FitModel, EqualErrorsHaveZeroVariance) {
  const std::vector<double> errors(10, 0.3), values(10, 1.0);
  const ErrorModel m = fit_model(errors, values, 1.0);
  EXPECT_DOUBLE_EQ(m.mu, 0.3);
  EXPECT_EQ(m.sigma2, 0.0);
  EXPECT_EQ(m.n_samples, 10u);
}

TEST(FitModel, BesselCorrectedVariance) {
  // Values 0..10; only the two samples at 5 fall in the 0.05 * 10 window.
  const std::vector<double> values{0, 1, 2, 5, 5, 8, 9, 10};
  const std::vector<double> errors{9, 9, 9, -1, 1, 9, 9, 9};
  const ErrorModel m = fit_model(errors, values, 5.0);
  EXPECT_EQ(m.mu, 0.0);
  EXPECT_EQ(m.sigma2, 2.0);
  EXPECT_EQ(m.n_samples, 2u);
  EXPECT_FALSE(m.fallback);
}

TEST(FitModel, WindowSelectsSubset) {
  std::vector<double> values, errors;
  for (int i = 0; i < 100; ++i) {
    values.push_back(i);
    errors.push_back(i < 50 ? 0.1 * (i % 2 ? 1 : -1) : 5.0);
  }
  // Window 0.25 * 99 around 24.75 covers exactly 0..49.
  const ErrorModel m = fit_model(errors, values, 24.75, 0.25);
  EXPECT_EQ(m.n_samples, 50u);
  EXPECT_NEAR(m.mu, 0.0, 1e-15);
}

TEST(FitModel, WidensThenFallsBack) {
  const std::vector<double> values{0, 100, 200, 300}, errors{1, 2, 3, 4};
  const ErrorModel widened = fit_model(errors, values, 150.0, 0.1);
  EXPECT_EQ(widened.n_samples, 2u);  // after one doubling, half-width 0.2 * 300 = 60
  EXPECT_DOUBLE_EQ(widened.window, 0.2);
  const ErrorModel fallback = fit_model(errors, values, 1e6, 0.01);
  EXPECT_TRUE(fallback.fallback);
  EXPECT_EQ(fallback.n_samples, 4u);
  EXPECT_THROW(fit_model(std::vector<double>{1.0}, std::vector<double>{1.0}, 0.0), SamplingError);
}

TEST(CrossingProbability, FarAboveIsZero) {
  const std::array<double, 8> c{20, 21, 22, 23, 24, 25, 26, 27};
  const ErrorModel m{0.0, 1.0, 0.0};
  EXPECT_LT(cell_crossing_probability(c, 0.0, m), 1e-12);
}

TEST(CrossingProbability, OneCornerAtIsovalue) {
  const std::array<double, 8> c{0, 100, 100, 100, 100, 100, 100, 100};
  EXPECT_DOUBLE_EQ(cell_crossing_probability(c, 0.0, {0.0, 1.0, 0.0}), 0.5);
}

TEST(CrossingProbability, ZeroSigmaIsMarchingCubesIndicator) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    std::array<double, 8> c{};
    for (double& v : c) v = u(rng);
    const double p = cell_crossing_probability(c, 0.3, {0.0, 0.0, 0.3});
    EXPECT_EQ(p, cell_crosses(c, 0.3) ? 1.0 : 0.0);
  }
}

TEST(CrossingProbability, MatchesMonteCarlo) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int cells = 50;
  int within_3se = 0;
  for (int cell = 0; cell < cells; ++cell) {
    std::array<double, 8> c{};
    for (double& v : c) v = u(rng);
    const ErrorModel m{0.05 * u(rng), 0.1 + 0.2 * (u(rng) + 1.0), 0.0};
    const double p = cell_crossing_probability(c, 0.1, m);
    std::normal_distribution<double> noise(m.mu, std::sqrt(m.sigma2));
    const int draws = 100000;
    int hits = 0;
    for (int k = 0; k < draws; ++k) {
      std::array<double, 8> s{};
      for (std::size_t j = 0; j < 8; ++j) s[j] = c[j] + noise(rng);
      hits += cell_crosses(s, 0.1);
    }
    const double mc = double(hits) / draws;
    const double se = std::sqrt(std::max(p * (1 - p), 1e-6) / draws);
    EXPECT_NEAR(p, mc, 0.01);
    within_3se += std::fabs(p - mc) <= 3 * se;
  }
  // 3 standard errors cover 99.7% per cell; allow a few misses across cells.
  EXPECT_GE(within_3se, cells * 95 / 100);
}

TEST(CrossingProbability, MonotoneInSigmaForOneSidedCells) {
  const std::array<double, 8> c{1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7};
  double prev = 0.0;
  for (double s2 : {0.0, 0.01, 0.1, 1.0, 10.0}) {
    const double p = cell_crossing_probability(c, 0.0, {0.0, s2, 0.0});
    EXPECT_GE(p, prev);
    EXPECT_LE(p, 1.0);
    prev = p;
  }
  EXPECT_GT(prev, 0.0);
}

TEST(ProbabilityField, ConstantVolumeIsZero) {
  const ProbabilityField f = probability_field(Volume({5, 5, 5}, 2.0), 1.0, {0.0, 0.0, 1.0});
  EXPECT_EQ(f.dims, (Dims{4, 4, 4}));
  for (double p : f.p) EXPECT_EQ(p, 0.0);
}

TEST(ProbabilityField, SphereIndicatorAndShell) {
  const Volume v = sphere_field({24, 24, 24}, 7.0);
  const ProbabilityField exact = probability_field(v, 0.0, {0.0, 0.0, 0.0});
  const ProbabilityField soft = probability_field(v, 0.0, {0.0, 0.25, 0.0});
  std::size_t crossed = 0, shell = 0;
  for (std::size_t z = 0; z < 23; ++z)
    for (std::size_t y = 0; y < 23; ++y)
      for (std::size_t x = 0; x < 23; ++x) {
        const std::size_t i = linear_index(exact.dims, x, y, z);
        const bool c = cell_crosses(cell_corners(v, x, y, z), 0.0);
        EXPECT_EQ(exact.p[i], c ? 1.0 : 0.0);
        crossed += c;
        if (!c && soft.p[i] > 1e-3) ++shell;
        EXPECT_GE(soft.p[i], 0.0);
        EXPECT_LE(soft.p[i], 1.0);
      }
  EXPECT_GT(crossed, 0u);
  EXPECT_GT(shell, 0u);
}

TEST(ProbabilityField, TranslationInvariant) {
  const Volume v = uniform_noise({6, 6, 6}, 6);
  std::vector<double> shifted(v.values().begin(), v.values().end());
  for (double& x : shifted) x += 0.5;
  const ErrorModel m{0.01, 0.04, 0.0};
  const auto a = probability_field(v, 0.2, m);
  const auto b = probability_field(Volume(v.dims(), shifted), 0.7, m);
  for (std::size_t i = 0; i < a.p.size(); ++i) EXPECT_NEAR(a.p[i], b.p[i], 1e-12);
}

TEST(ProbabilityField, TooSmallThrows) {
  EXPECT_THROW(probability_field(Volume({1, 4, 4}, 0.0), 0.0, {}), ShapeError);
}

TEST(NormalCdf, KnownValues) {
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_cdf(1.0), 0.8413447460685429, 1e-15);
  EXPECT_NEAR(normal_cdf(-3.0), 0.0013498980316301, 1e-15);
}

}  // namespace
}  // namespace mrc
