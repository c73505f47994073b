#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "axia/tasks/rainfall.hpp"

using namespace axia;
using namespace axia::rainfall;

TEST(Rainfall, NoiseFreeConstant) {
  const RainConfig cfg{0.01, 0.01, 253, 0.01, 0.5, 0.1};
  const auto r = rainfall_series(cfg, 0, 0.0);
  ASSERT_EQ(r.size(), 8760u);
  const double expected = 5.4 / (461.0 * 253.0 * 253.0);
  EXPECT_NEAR(r[0], 1.830e-7, 1e-10);
  EXPECT_NEAR(r[0], expected, 1e-9 * expected);
  for (double v : r) EXPECT_EQ(v, r[0]);
}

TEST(Rainfall, LinearInUpdraft) {
  RainConfig a{0.02, 0.01, 285, 0.03, 2.0, 0.5};
  RainConfig b = a;
  b.w = 0.02;
  const auto ra = rainfall_series(a, 4, 0.0), rb = rainfall_series(b, 4, 0.0);
  for (std::size_t t = 0; t < ra.size(); t += 997) EXPECT_NEAR(rb[t], 2 * ra[t], 1e-22);
}

TEST(Rainfall, SeededAndDeterministic) {
  const RainConfig cfg{0.04, 0.1, 301, 0.03, 1.5, 0.3};
  EXPECT_EQ(rainfall_series(cfg, 37), rainfall_series(cfg, 37));
  EXPECT_NE(rainfall_series(cfg, 37), rainfall_series(cfg, 42));
}

TEST(RainScores, HandExample) {
  const std::vector<double> truth{1, 2, 3}, pred{1, 1, 1};
  const auto s = score(truth, pred);
  EXPECT_DOUBLE_EQ(s.mae, 1.0);
  EXPECT_DOUBLE_EQ(s.mse, 5.0 / 3.0);
  EXPECT_NEAR(s.rmse, 1.2910, 1e-4);
  const auto perfect = score(truth, truth);
  EXPECT_EQ(perfect.mse, 0.0);
  EXPECT_EQ(perfect.rmse, 0.0);
  EXPECT_EQ(perfect.mae, 0.0);
}

TEST(RainScores, EveryModelRmseSquaredIsMse) {
  const RainConfig cfg{0.02, 0.1, 269, 0.01, 1.0, 0.2};
  const auto series = rainfall_series(cfg, 0);
  for (auto m : kModels) {
    const auto s = regressor_scores(m, series, 0);
    EXPECT_EQ(s.rmse, std::sqrt(s.mse));
    EXPECT_LE(s.mae, s.rmse);
    EXPECT_GT(s.mse, 0.0);
  }
}

TEST(RainScores, ConstantSeriesIsScored) {
  const std::vector<double> flat(8760, 2.5);
  for (auto m : kModels) {
    const auto s = regressor_scores(m, flat, 1);
    EXPECT_NEAR(s.mse, 0.0, 1e-18);
    EXPECT_NEAR(s.mae, 0.0, 1e-9);
  }
}

TEST(RainScores, ModelsRecoverPlantedHarmonic) {
  std::vector<double> y(8760);
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = 1.0 + std::sin(2 * M_PI * double(t) / 24.0);
  EXPECT_LT(regressor_scores(Model::linear, y, 0).mse, 1e-12);
  EXPECT_LT(regressor_scores(Model::fourier_basis, y, 0).mse, 1e-12);
  EXPECT_LT(regressor_scores(Model::spline_additive, y, 0).mse, 1e-3);
  EXPECT_LT(regressor_scores(Model::tree_bagger, y, 0).mse, 0.5);
}

TEST(Stagger, Prefixes) {
  const auto s = rainfall_series({0.01, 0.01, 253, 0.01, 0.5, 0.1}, 3);
  EXPECT_EQ(staggered_series(s, 4).size(), 8760u);
  EXPECT_EQ(staggered_series(s, 1).size(), 2190u);
  for (std::size_t k = 1; k < 4; ++k) {
    const auto a = staggered_series(s, k), b = staggered_series(s, k + 1);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
  }
  EXPECT_THROW(staggered_series(s, 0), std::out_of_range);
  EXPECT_THROW(staggered_series(s, 5), std::out_of_range);
}

TEST(Stagger, FullRankMatchesUnstaggered) {
  const auto s = rainfall_series({0.02, 0.1, 293, 0.03, 1.0, 0.4}, 42);
  for (auto m : kModels) {
    const auto a = regressor_scores(m, s, 42), b = regressor_scores(m, staggered_series(s, 4), 42);
    EXPECT_EQ(a.mse, b.mse);
    EXPECT_EQ(a.mae, b.mae);
  }
}

TEST(Rainfall, SpaceSize) {
  const auto sp = make_space();
  EXPECT_EQ(sp.size(), 2400u);
  const auto c = config_from(sp.config_at(sp.size() - 1));
  EXPECT_EQ(c.qs, 0.04);
  EXPECT_EQ(c.sigma_r, 0.5);
}
