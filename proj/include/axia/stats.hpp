#pragma once

/// Sample statistics, confidence intervals and coverage accuracy.

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "axia/errors.hpp"

namespace axia {

/// Neumaier-compensated sum in iteration order.
template <typename Range>
double compensated_sum(const Range& values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      carry += (sum - t) + v;
    else
      carry += (v - t) + sum;
    sum = t;
  }
  return sum + carry;
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

/// Arithmetic mean and population standard deviation (divisor n), both
/// accumulated in the order given.
inline MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean_std of an empty list");
  const auto n = static_cast<double>(values.size());
  const double mean = compensated_sum(values) / n;
  if (values.size() == 1) return {mean, 0.0};
  double sum = 0.0, carry = 0.0;
  for (double v : values) {
    const double d = (v - mean) * (v - mean);
    const double t = sum + d;
    if (sum >= d)
      carry += (sum - t) + d;
    else
      carry += (d - t) + sum;
    sum = t;
  }
  return {mean, std::sqrt((sum + carry) / n)};
}

struct Estimate {
  double mean = 0.0;
  double std = 0.0;
  std::size_t n = 1;     // sampled configurations
  std::size_t cost = 1;  // (configuration, repetition) evaluations read
};

struct Interval {
  double low = 0.0;
  double high = 0.0;
  double level = 0.95;

  bool contains(double x) const noexcept { return low <= x && x <= high; }
  double half_width() const noexcept { return 0.5 * (high - low); }
};

/// `paper`: standard-normal quantile for n <= 30, Student-t with n-1 degrees
/// of freedom above. `conventional` swaps the two branches.
enum class CiRule { paper, conventional };

inline std::string_view to_string(CiRule r) { return r == CiRule::paper ? "paper" : "conventional"; }

inline CiRule parse_ci_rule(std::string_view s) {
  if (s == "paper") return CiRule::paper;
  if (s == "conventional") return CiRule::conventional;
  throw UsageError("unknown CI rule '" + std::string(s) + "'");
}

inline constexpr std::size_t kZScoreLimit = 30;

inline double normal_quantile(double p) { return boost::math::quantile(boost::math::normal_distribution<double>(), p); }

inline double student_t_quantile(double p, double dof) {
  return boost::math::quantile(boost::math::students_t_distribution<double>(dof), p);
}

/// Two-sided critical value for a sample of `n` configurations.
inline double critical_value(std::size_t n, double level, CiRule rule) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must be in (0, 1)");
  const double p = 0.5 + level / 2.0;
  const bool small = n <= kZScoreLimit;
  const bool use_z = (rule == CiRule::paper) ? small : !small;
  if (use_z || n < 2) return normal_quantile(p);
  return student_t_quantile(p, static_cast<double>(n - 1));
}

inline Interval confidence_interval(const Estimate& est, double level = 0.95, CiRule rule = CiRule::paper) {
  if (est.n < 1) throw std::invalid_argument("estimate needs n >= 1");
  if (est.std == 0.0) return {est.mean, est.mean, level};
  const double half = critical_value(est.n, level, rule) * est.std / std::sqrt(static_cast<double>(est.n));
  return {est.mean - half, est.mean + half, level};
}

inline double coverage_accuracy(std::span<const Interval> intervals, double ground_truth) {
  if (intervals.empty()) throw std::invalid_argument("coverage of an empty interval list");
  std::size_t hit = 0;
  for (const auto& iv : intervals)
    if (iv.contains(ground_truth)) ++hit;
  return static_cast<double>(hit) / static_cast<double>(intervals.size());
}

}  // namespace axia
