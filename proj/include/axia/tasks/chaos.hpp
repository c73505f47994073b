#pragma once

/// Lorenz / Roessler trajectories scored by a largest-Lyapunov estimate and a
/// three-dimensional two-sample Kolmogorov-Smirnov statistic.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "axia/ec_space.hpp"

namespace axia::chaos {

enum class System { lorenz, roessler };

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

struct ChaosConfig {
  double step = 0.01;       // integration step h
  Vec3 params;              // (a, b, c)
  std::size_t steps = 200;  // N
  Vec3 init;                // (x, y, z) at t = 0
};

inline constexpr double kDivergenceLimit = 1e12;
inline constexpr double kSeparationFloor = 1e-12;

struct Trajectory {
  std::vector<Vec3> points;                // state after step 1..N
  std::optional<std::size_t> diverged_at;  // index of the first clamped point

  bool diverged() const noexcept { return diverged_at.has_value(); }

  /// The points the indexes are computed on: everything up to and including
  /// the first clamped point, extended to at least four points.
  std::span<const Vec3> analysis_span() const noexcept {
    if (!diverged_at) return points;
    const std::size_t len = std::min(points.size(), std::max<std::size_t>(*diverged_at + 1, 4));
    return std::span<const Vec3>(points).first(len);
  }
};

inline Vec3 derivative(System system, const Vec3& p, const Vec3& s) noexcept {
  const double a = p.x, b = p.y, c = p.z;
  if (system == System::lorenz) return {a * (s.y - s.x), s.x * (b - s.z) - s.y, s.x * s.y - c * s.z};
  return {-s.y - s.z, s.x + a * s.y, b + s.z * (s.x - c)};
}

/// Forward Euler with h = cfg.step for cfg.steps steps. A component beyond
/// +-1e12 (or non-finite) marks the trajectory diverged; the state is clamped
/// and held for the remaining steps.
inline Trajectory simulate_attractor(System system, const ChaosConfig& cfg) {
  if (!(cfg.step > 0.0)) throw std::invalid_argument("step size must be positive");
  if (cfg.steps < 2) throw std::invalid_argument("need at least two steps");
  Trajectory traj;
  traj.points.reserve(cfg.steps);
  Vec3 s = cfg.init;
  const double h = cfg.step;
  for (std::size_t i = 0; i < cfg.steps; ++i) {
    if (!traj.diverged_at) {
      const Vec3 d = derivative(system, cfg.params, s);
      s = {s.x + h * d.x, s.y + h * d.y, s.z + h * d.z};
      bool clamped = false;
      for (double* v : {&s.x, &s.y, &s.z}) {
        if (!std::isfinite(*v) || std::abs(*v) > kDivergenceLimit) {
          *v = std::isnan(*v) ? kDivergenceLimit : std::copysign(kDivergenceLimit, *v);
          clamped = true;
        }
      }
      if (clamped) traj.diverged_at = i;
    }
    traj.points.push_back(s);
  }
  return traj;
}

namespace detail {
inline double distance(const Vec3& a, const Vec3& b) noexcept {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}
}  // namespace detail

/// Largest Lyapunov exponent per step, nearest-neighbour divergence method.
///
/// Each point is paired with its nearest neighbour outside a temporal window
/// of N/10 steps; the mean log separation of the pairs is tracked for
/// min(20, N/4) steps and the exponent is the least-squares slope.
inline double lyapunov_exponent(std::span<const Vec3> traj) {
  const std::size_t n = traj.size();
  if (n < 4) throw std::invalid_argument("trajectory too short for a Lyapunov estimate");
  const std::size_t window = n / 10;
  const std::size_t horizon = std::max<std::size_t>(1, std::min<std::size_t>(20, n / 4));
  const std::size_t usable = n - horizon;

  std::vector<double> mean_log(horizon + 1, 0.0);
  std::size_t pairs = 0;
  for (std::size_t j = 0; j < usable; ++j) {
    std::size_t best = usable;
    double best_d2 = 0.0;
    for (std::size_t i = 0; i < usable; ++i) {
      const std::size_t gap = i > j ? i - j : j - i;
      if (gap <= window) continue;
      const double dx = traj[i].x - traj[j].x, dy = traj[i].y - traj[j].y, dz = traj[i].z - traj[j].z;
      const double d2 = dx * dx + dy * dy + dz * dz;
      if (best == usable || d2 < best_d2) {
        best = i;
        best_d2 = d2;
      }
    }
    if (best == usable) continue;
    for (std::size_t k = 0; k <= horizon; ++k)
      mean_log[k] += std::log(std::max(detail::distance(traj[j + k], traj[best + k]), kSeparationFloor));
    ++pairs;
  }
  if (pairs == 0) return 0.0;
  for (double& v : mean_log) v /= static_cast<double>(pairs);
  if (std::all_of(mean_log.begin(), mean_log.end(), [&](double v) { return v == mean_log.front(); })) return 0.0;

  const double kbar = static_cast<double>(horizon) / 2.0;
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k <= horizon; ++k) {
    const double dk = static_cast<double>(k) - kbar;
    num += dk * mean_log[k];
    den += dk * dk;
  }
  return num / den;
}

/// Fasano-Franceschini statistic between the first and second halves: the
/// largest difference of octant fractions over every sample point used as
/// origin. A point lies on the "high" side of an axis when strictly greater
/// than the origin coordinate.
inline double ks_statistic_3d(std::span<const Vec3> traj) {
  if (traj.size() < 4) throw std::invalid_argument("trajectory too short for a KS statistic");
  const std::size_t half = traj.size() / 2;
  const auto first = traj.first(half);
  const auto second = traj.subspan(half);
  const double inv_a = 1.0 / static_cast<double>(first.size());
  const double inv_b = 1.0 / static_cast<double>(second.size());

  auto octant = [](const Vec3& p, const Vec3& o) noexcept {
    return static_cast<unsigned>(p.x > o.x) | (static_cast<unsigned>(p.y > o.y) << 1) |
           (static_cast<unsigned>(p.z > o.z) << 2);
  };

  double d = 0.0;
  for (const Vec3& origin : traj) {
    std::array<std::size_t, 8> ca{}, cb{};
    for (const Vec3& p : first) ++ca[octant(p, origin)];
    for (const Vec3& p : second) ++cb[octant(p, origin)];
    for (std::size_t q = 0; q < 8; ++q)
      d = std::max(d, std::abs(static_cast<double>(ca[q]) * inv_a - static_cast<double>(cb[q]) * inv_b));
  }
  return std::min(d, 1.0);
}

struct ChaosIndexes {
  double lyapunov = 0.0;
  double ks = 0.0;
};

inline ChaosIndexes chaos_result(const ChaosConfig& cfg, System system) {
  const Trajectory traj = simulate_attractor(system, cfg);
  const auto span = traj.analysis_span();
  return {lyapunov_exponent(span), ks_statistic_3d(span)};
}

// ---------------------------------------------------------------------------
// EC space

inline constexpr std::array<double, 5> kSteps{0.01, 0.005, 0.001, 0.0005, 0.0001};
inline constexpr std::array<Vec3, 10> kParams{{{0.1, 0.2, 5.0},
                                               {0.5, 1.2, 12.0},
                                               {1.0, 0.3, 20.0},
                                               {1.5, 1.8, 8.0},
                                               {0.3, 1.6, 30.0},
                                               {1.8, 0.6, 18.0},
                                               {0.7, 1.1, 25.0},
                                               {1.3, 0.9, 35.0},
                                               {0.2, 1.7, 10.0},
                                               {1.9, 0.4, 40.0}}};
inline constexpr std::array<std::size_t, 4> kLengths{200, 400, 800, 1600};
inline constexpr std::array<Vec3, 10> kInits{{{1.0, 5.0, 10.0},
                                              {-2.0, -8.0, -15.0},
                                              {3.0, -12.0, 20.0},
                                              {-4.0, 16.0, -25.0},
                                              {5.0, 20.0, 30.0},
                                              {-6.0, -24.0, -35.0},
                                              {7.0, -28.0, 40.0},
                                              {-8.0, 32.0, -45.0},
                                              {9.0, 36.0, 50.0},
                                              {-10.0, -40.0, -55.0}}};

inline std::string triple_label(const Vec3& v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%g, %g, %g)", v.x, v.y, v.z);
  return buf;
}

inline EcSpace make_space() {
  Factor p{"p", {}, "step"};
  for (double s : kSteps) p.values.push_back(format_label(s));
  Factor abc{"abc", {}, ""};
  for (const auto& v : kParams) abc.values.push_back(triple_label(v));
  Factor len{"N", {}, "steps"};
  for (auto l : kLengths) len.values.push_back(std::to_string(l));
  Factor xyz{"xyz", {}, ""};
  for (const auto& v : kInits) xyz.values.push_back(triple_label(v));
  return EcSpace({p, abc, len, xyz});
}

inline ChaosConfig config_from(const Config& c) {
  return {kSteps.at(c[0]), kParams.at(c[1]), kLengths.at(c[2]), kInits.at(c[3])};
}

}  // namespace axia::chaos
