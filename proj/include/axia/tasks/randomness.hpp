#pragma once

/// Sums of logistic maps and four classical randomness tests.

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "axia/ec_space.hpp"

namespace axia::randomness {

inline constexpr double kMapOffset = 0.013;
inline constexpr double kEscapeClamp = 1e6;
inline constexpr double kDeclareThreshold = 0.01;

struct LogisticConfig {
  std::size_t maps = 1;
  double x0 = 0.1;
  double r = 3.6;
  std::size_t length = 10;
};

/// Start value of map i (0-based): x0 + 0.013 i wrapped into (0, 1).
inline double map_start(double x0, std::size_t i) {
  double v = std::fmod(x0 + kMapOffset * static_cast<double>(i), 1.0);
  if (v <= 0.0) v += 1.0;
  if (v >= 1.0) v = std::nextafter(1.0, 0.0);
  return v;
}

/// y_n = sum_i x_{n,i} for n = 1 .. length.
inline std::vector<double> logistic_sequence(const LogisticConfig& cfg) {
  if (cfg.maps < 1) throw std::invalid_argument("need at least one map");
  std::vector<double> x(cfg.maps);
  for (std::size_t i = 0; i < cfg.maps; ++i) x[i] = map_start(cfg.x0, i);
  std::vector<double> y(cfg.length, 0.0);
  for (std::size_t n = 0; n < cfg.length; ++n) {
    double sum = 0.0;
    for (double& v : x) {
      v = std::clamp(cfg.r * v * (1.0 - v), -kEscapeClamp, kEscapeClamp);
      sum += v;
    }
    y[n] = sum;
  }
  return y;
}

enum class Test { frequency, runs, overlapping_permutations, birthday_spacings };
inline constexpr std::array<Test, 4> kTests{Test::frequency, Test::runs, Test::overlapping_permutations,
                                            Test::birthday_spacings};

inline std::size_t minimum_length(Test t) noexcept {
  switch (t) {
    case Test::frequency:
    case Test::runs: return 8;
    case Test::overlapping_permutations: return 15;
    case Test::birthday_spacings: return 16;
  }
  return 0;
}

struct Verdict {
  double p_value = 0.0;
  bool declared_random = false;
  bool short_input = false;
};

inline Verdict verdict(double p, double threshold = kDeclareThreshold) {
  p = std::clamp(p, 0.0, 1.0);
  return {p, p >= threshold, false};
}

/// Median; the mean of the two middle values for even lengths.
inline double median(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("median of an empty sequence");
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  const std::size_t h = s.size() / 2;
  return s.size() % 2 ? s[h] : 0.5 * (s[h - 1] + s[h]);
}

inline std::vector<int> binarize(std::span<const double> seq) {
  const double m = median(seq);
  std::vector<int> bits(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) bits[i] = seq[i] >= m ? 1 : 0;
  return bits;
}

inline double frequency_p(std::span<const int> bits) {
  double s = 0.0;
  for (int b : bits) s += b ? 1.0 : -1.0;
  const double obs = std::abs(s) / std::sqrt(static_cast<double>(bits.size()));
  return boost::math::erfc(obs / std::sqrt(2.0));
}

/// Returns 0 when the ones-proportion prerequisite |pi - 1/2| < 2 / sqrt(n) fails.
inline double runs_p(std::span<const int> bits) {
  const auto n = static_cast<double>(bits.size());
  double ones = 0.0;
  for (int b : bits) ones += b;
  const double pi = ones / n;
  if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(n)) return 0.0;
  double v = 1.0;
  for (std::size_t i = 1; i < bits.size(); ++i) v += bits[i] != bits[i - 1];
  const double num = std::abs(v - 2.0 * n * pi * (1.0 - pi));
  const double den = 2.0 * std::sqrt(2.0 * n) * pi * (1.0 - pi);
  return boost::math::erfc(num / den);
}

/// Index 0..5 of the ordering pattern of three values; equal values keep index order.
inline std::size_t permutation_class(double a, double b, double c) {
  std::array<std::size_t, 3> idx{0, 1, 2};
  const std::array<double, 3> v{a, b, c};
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  static constexpr std::array<std::array<std::size_t, 3>, 6> kOrders{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (std::size_t k = 0; k < kOrders.size(); ++k)
    if (kOrders[k] == idx) return k;
  return 0;
}

inline double chi_square_sf(double x, double dof) { return boost::math::gamma_q(dof / 2.0, x / 2.0); }

inline double overlapping_permutations_p(std::span<const double> seq) {
  std::array<double, 6> count{};
  const std::size_t windows = seq.size() - 2;
  for (std::size_t i = 0; i < windows; ++i) count[permutation_class(seq[i], seq[i + 1], seq[i + 2])] += 1.0;
  const double expected = static_cast<double>(windows) / 6.0;
  double chi = 0.0;
  for (double c : count) chi += (c - expected) * (c - expected) / expected;
  return chi_square_sf(chi, 5.0);
}

inline constexpr std::size_t kBirthdayDays = 1024;

/// Two-sided Poisson tail probability of observing k at mean lambda.
inline double poisson_two_sided(std::size_t k, double lambda) {
  const double lower = boost::math::gamma_q(static_cast<double>(k) + 1.0, lambda);  // P(X <= k)
  const double upper = k == 0 ? 1.0 : boost::math::gamma_p(static_cast<double>(k), lambda);  // P(X >= k)
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

/// Values are scaled into 1024 bins between min and max; J counts repeated
/// spacings among the m sorted birthdays and is compared with
/// Poisson(m^3 / (4 * 1024)). A constant sequence gets p = 0.
inline double birthday_spacings_p(std::span<const double> seq) {
  const auto [lo_it, hi_it] = std::minmax_element(seq.begin(), seq.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) return 0.0;
  const std::size_t m = seq.size();
  std::vector<std::int64_t> days(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = (seq[i] - lo) / (hi - lo);
    days[i] = std::min<std::int64_t>(kBirthdayDays - 1, static_cast<std::int64_t>(u * kBirthdayDays));
  }
  std::sort(days.begin(), days.end());
  std::vector<std::int64_t> spacing(m);
  spacing[0] = days[0];
  for (std::size_t i = 1; i < m; ++i) spacing[i] = days[i] - days[i - 1];
  std::sort(spacing.begin(), spacing.end());
  const auto distinct = static_cast<std::size_t>(std::unique(spacing.begin(), spacing.end()) - spacing.begin());
  const std::size_t j = m - distinct;
  const double md = static_cast<double>(m);
  return poisson_two_sided(j, md * md * md / (4.0 * static_cast<double>(kBirthdayDays)));
}

inline Verdict run_test(Test test, std::span<const double> seq, double threshold = kDeclareThreshold) {
  if (seq.size() < minimum_length(test)) return {0.0, false, true};
  switch (test) {
    case Test::frequency: return verdict(frequency_p(binarize(seq)), threshold);
    case Test::runs: return verdict(runs_p(binarize(seq)), threshold);
    case Test::overlapping_permutations: return verdict(overlapping_permutations_p(seq), threshold);
    case Test::birthday_spacings: return verdict(birthday_spacings_p(seq), threshold);
  }
  return {};
}

struct RandomnessIndexes {
  double true_rate = 0.0;
  double avg_p = 0.0;
};

/// true_rate counts sequences declared non-random; avg_p is the mean p-value.
inline RandomnessIndexes randomness_indexes(std::span<const Verdict> verdicts) {
  if (verdicts.empty()) throw std::invalid_argument("no verdicts");
  RandomnessIndexes r;
  for (const auto& v : verdicts) {
    r.true_rate += v.declared_random ? 0.0 : 1.0;
    r.avg_p += v.p_value;
  }
  r.true_rate /= static_cast<double>(verdicts.size());
  r.avg_p /= static_cast<double>(verdicts.size());
  return r;
}

// ---------------------------------------------------------------------------
// EC space

inline constexpr std::array<double, 9> kX0{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
inline constexpr std::array<double, 4> kR{-1.8, -1.5, 3.6, 3.8};
inline constexpr std::array<std::size_t, 4> kLengths{10, 20, 50, 100};

inline EcSpace make_space() {
  Factor n{"N", {}, "maps"};
  for (int i = 1; i <= 10; ++i) n.values.push_back(std::to_string(i));
  Factor x0{"X0", {}, ""};
  for (double v : kX0) x0.values.push_back(format_label(v));
  Factor r{"r", {}, ""};
  for (double v : kR) r.values.push_back(format_label(v));
  Factor len{"|y|", {}, ""};
  for (auto v : kLengths) len.values.push_back(std::to_string(v));
  return EcSpace({n, x0, r, len});
}

inline LogisticConfig config_from(const Config& c) {
  if (c[0] >= 10) throw std::out_of_range("map count index out of range");
  return {c[0] + 1, kX0.at(c[1]), kR.at(c[2]), kLengths.at(c[3])};
}

}  // namespace axia::randomness
