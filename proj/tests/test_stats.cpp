#include <gtest/gtest.h>

#include <vector>

#include "axia/rng.hpp"
#include "axia/stats.hpp"

using namespace axia;

TEST(MeanStd, Examples) {
  std::vector<double> c{5, 5, 5};
  EXPECT_EQ(mean_std(c).mean, 5.0);
  EXPECT_EQ(mean_std(c).std, 0.0);
  std::vector<double> v{1, 2, 3};
  EXPECT_DOUBLE_EQ(mean_std(v).mean, 2.0);
  EXPECT_NEAR(mean_std(v).std, 0.816496580927726, 1e-15);
  std::vector<double> one{-3.25};
  EXPECT_EQ(mean_std(one).mean, -3.25);
  EXPECT_EQ(mean_std(one).std, 0.0);
  EXPECT_THROW(mean_std(std::vector<double>{}), std::invalid_argument);
}

TEST(MeanStd, CompensatedSumKeepsSmallTerms) {
  std::vector<double> v{1e16, 1.0, -1e16, 1.0};
  EXPECT_EQ(compensated_sum(v), 2.0);
}

TEST(Quantiles, NormalAndStudentTable) {
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
  struct Row {
    double p, dof, q;
  };
  const Row table[] = {{0.975, 1, 12.706204736432095}, {0.975, 2, 4.302652729696142}, {0.975, 5, 2.570581835636314},
                       {0.975, 10, 2.2281388519649385}, {0.975, 30, 2.0422724563012373},
                       {0.975, 99, 1.9842169515086827}, {0.995, 10, 3.16927267261695}, {0.95, 40, 1.6838510133356523}};
  for (const auto& r : table) EXPECT_NEAR(student_t_quantile(r.p, r.dof), r.q, 1e-8) << r.dof;
}

TEST(ConfidenceInterval, ZBelowThirty) {
  const auto iv = confidence_interval({0.0, 1.0, 25, 25}, 0.95);
  EXPECT_NEAR(iv.high, 0.39199, 5e-6);
  EXPECT_NEAR(iv.low, -0.39199, 5e-6);
  EXPECT_EQ(critical_value(30, 0.95, CiRule::paper), normal_quantile(0.975));
}

TEST(ConfidenceInterval, TAboveThirty) {
  const auto iv = confidence_interval({0.0, 1.0, 100, 100}, 0.95);
  EXPECT_NEAR(iv.half_width(), 0.19842, 5e-6);
  EXPECT_EQ(critical_value(31, 0.95, CiRule::paper), student_t_quantile(0.975, 30));
}

TEST(ConfidenceInterval, ConventionalRuleSwapsBranches) {
  EXPECT_EQ(critical_value(25, 0.95, CiRule::conventional), student_t_quantile(0.975, 24));
  EXPECT_EQ(critical_value(100, 0.95, CiRule::conventional), normal_quantile(0.975));
  EXPECT_EQ(parse_ci_rule("conventional"), CiRule::conventional);
  EXPECT_THROW(parse_ci_rule("bogus"), UsageError);
}

TEST(ConfidenceInterval, DegenerateWhenStdZero) {
  const auto iv = confidence_interval({4.5, 0.0, 1, 1});
  EXPECT_EQ(iv.low, 4.5);
  EXPECT_EQ(iv.high, 4.5);
  EXPECT_THROW(confidence_interval({0, 1, 10, 10}, 1.0), std::invalid_argument);
}

TEST(Coverage, Counting) {
  std::vector<Interval> iv;
  for (int i = 0; i < 50; ++i) iv.push_back(i < 47 ? Interval{-1, 1, 0.95} : Interval{2, 3, 0.95});
  EXPECT_DOUBLE_EQ(coverage_accuracy(iv, 0.0), 0.94);
  std::vector<Interval> point(5, Interval{7, 7, 0.95});
  EXPECT_EQ(coverage_accuracy(point, 7.0), 1.0);
  EXPECT_EQ(coverage_accuracy(point, 7.5), 0.0);
  EXPECT_THROW(coverage_accuracy(std::vector<Interval>{}, 0.0), std::invalid_argument);
}

TEST(Rng, DeterministicAndUniform) {
  Rng a(12), b(12);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
  Rng r(3);
  double s = 0.0;
  for (int i = 0; i < 100000; ++i) s += r.uniform01();
  EXPECT_NEAR(s / 100000, 0.5, 0.005);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(r.below(7), 7u);
  EXPECT_NE(derive_seed(1, "a"), derive_seed(1, "b"));
  EXPECT_NE(derive_seed(1, "a", {0}), derive_seed(1, "a", {1}));
  EXPECT_NE(derive_seed(0, "a", {0}), derive_seed(1, "a", {0}));
}

TEST(Rng, NormalMoments) {
  Rng r(8);
  std::vector<double> v(200000);
  for (auto& x : v) x = r.normal();
  const auto ms = mean_std(v);
  EXPECT_NEAR(ms.mean, 0.0, 0.01);
  EXPECT_NEAR(ms.std, 1.0, 0.01);
}
