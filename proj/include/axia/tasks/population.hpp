#pragma once

/// Single-species cellular automaton on an a x a grid and four stability
/// indexes of the total-population history.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "axia/ec_space.hpp"
#include "axia/rng.hpp"
#include "axia/stats.hpp"

namespace axia::population {

enum class Species { bacteria, yeast, algae };
inline constexpr std::array<Species, 3> kSpecies{Species::bacteria, Species::yeast, Species::algae};

enum class Pattern { up, down, left, right, centered, spread };
inline constexpr std::array<Pattern, 6> kPatterns{Pattern::up,    Pattern::down,     Pattern::left,
                                                  Pattern::right, Pattern::centered, Pattern::spread};

inline constexpr double kDeathProbability = 0.05;

inline double capacity_coefficient(Species s) noexcept {
  switch (s) {
    case Species::bacteria: return 24.0;
    case Species::yeast: return 11.0;
    case Species::algae: return 7.0;
  }
  return 0.0;
}

inline double resource_coefficient(Species s) noexcept {
  switch (s) {
    case Species::bacteria: return 0.3;
    case Species::yeast: return 0.6;
    case Species::algae: return 0.5;
  }
  return 0.0;
}

struct ColonyConfig {
  std::size_t side = 10;
  Pattern pattern = Pattern::centered;
  std::size_t steps = 5;
  double capacity = 4.0;
  double resource = 1.0;
};

/// Per-cell ceiling ceil(L * kappa_cap / 4).
inline std::uint32_t cell_cap(double capacity, Species s) {
  return static_cast<std::uint32_t>(std::ceil(capacity * capacity_coefficient(s) / 4.0));
}

class Grid {
 public:
  explicit Grid(std::size_t side) : side_(side), cells_(side * side, 0) {}

  std::size_t side() const noexcept { return side_; }
  std::uint32_t& at(std::size_t i, std::size_t j) { return cells_[i * side_ + j]; }
  std::uint32_t at(std::size_t i, std::size_t j) const { return cells_[i * side_ + j]; }
  std::span<const std::uint32_t> cells() const noexcept { return cells_; }
  std::vector<std::uint32_t>& raw() noexcept { return cells_; }

  std::uint64_t total() const noexcept {
    std::uint64_t t = 0;
    for (auto c : cells_) t += c;
    return t;
  }

 private:
  std::size_t side_;
  std::vector<std::uint32_t> cells_;
};

/// Blocks of ceil(a/5)^2 cells against an edge centre or at the grid centre;
/// `spread` seeds every cell whose row and column are multiples of ceil(a/4).
inline Grid initial_grid(std::size_t side, Pattern pattern) {
  if (side == 0) throw std::invalid_argument("grid side must be positive");
  Grid g(side);
  if (pattern == Pattern::spread) {
    const std::size_t m = (side + 3) / 4;
    for (std::size_t i = 0; i < side; i += m)
      for (std::size_t j = 0; j < side; j += m) g.at(i, j) = 1;
    return g;
  }
  const std::size_t k = (side + 4) / 5;
  const std::size_t mid = (side - k) / 2;
  std::size_t r0 = mid, c0 = mid;
  switch (pattern) {
    case Pattern::up: r0 = 0; break;
    case Pattern::down: r0 = side - k; break;
    case Pattern::left: c0 = 0; break;
    case Pattern::right: c0 = side - k; break;
    default: break;
  }
  for (std::size_t i = r0; i < r0 + k; ++i)
    for (std::size_t j = c0; j < c0 + k; ++j) g.at(i, j) = 1;
  return g;
}

/// Synchronous update: every occupied cell reproduces into each in-grid
/// 4-neighbour with probability min(1, s * kappa_res) * (1 - n_target / cap),
/// then loses one individual with probability 0.05; counts are clamped to
/// [0, cap]. Returns P(0) .. P(n).
inline std::vector<std::uint64_t> simulate_colony(Grid cur, const ColonyConfig& cfg, Species species, std::uint64_t seed,
                                                  Grid* final_grid = nullptr) {
  if (cur.side() != cfg.side) throw std::invalid_argument("start grid does not match the configured side");
  const std::uint32_t cap = cell_cap(cfg.capacity, species);
  const double growth = std::min(1.0, cfg.resource * resource_coefficient(species));
  const double inv_cap = 1.0 / static_cast<double>(cap);
  const std::size_t a = cfg.side;
  Rng rng(seed);

  std::vector<std::uint64_t> history;
  history.reserve(cfg.steps + 1);
  history.push_back(cur.total());
  Grid next = cur;
  for (std::size_t step = 0; step < cfg.steps; ++step) {
    next.raw() = cur.raw();
    for (std::size_t i = 0; i < a; ++i) {
      for (std::size_t j = 0; j < a; ++j) {
        if (cur.at(i, j) == 0) continue;
        auto offer = [&](std::size_t ni, std::size_t nj) {
          const double p = growth * (1.0 - static_cast<double>(cur.at(ni, nj)) * inv_cap);
          if (rng.bernoulli(p)) ++next.at(ni, nj);
        };
        if (i > 0) offer(i - 1, j);
        if (i + 1 < a) offer(i + 1, j);
        if (j > 0) offer(i, j - 1);
        if (j + 1 < a) offer(i, j + 1);
        if (rng.bernoulli(kDeathProbability)) --next.at(i, j);
      }
    }
    for (auto& c : next.raw()) c = std::min(c, cap);
    std::swap(cur, next);
    history.push_back(cur.total());
  }
  if (final_grid) *final_grid = cur;
  return history;
}

inline std::vector<std::uint64_t> simulate_colony(const ColonyConfig& cfg, Species species, std::uint64_t seed,
                                                  Grid* final_grid = nullptr) {
  return simulate_colony(initial_grid(cfg.side, cfg.pattern), cfg, species, seed, final_grid);
}

struct StabilityIndexes {
  double avg_pop = 0.0;
  double std_pop = 0.0;
  double half_life = 0.0;
  double growth_rate = 0.0;
};

/// half_life is the first t >= 1 with P(t) <= P(0) / 2, or n + 1 when there is
/// none or P(0) = 0.
inline StabilityIndexes stability_indexes(std::span<const std::uint64_t> hist) {
  if (hist.size() < 2) throw std::invalid_argument("history needs at least two points");
  std::vector<double> p(hist.begin(), hist.end());
  const auto ms = mean_std(p);
  const std::size_t n = hist.size() - 1;
  StabilityIndexes s;
  s.avg_pop = ms.mean;
  s.std_pop = ms.std;
  s.half_life = static_cast<double>(n + 1);
  if (hist[0] > 0) {
    for (std::size_t t = 1; t <= n; ++t) {
      if (2 * hist[t] <= hist[0]) {
        s.half_life = static_cast<double>(t);
        break;
      }
    }
  }
  s.growth_rate = (p[n] - p[0]) / std::max(p[0], 1.0);
  return s;
}

// ---------------------------------------------------------------------------
// EC space

inline constexpr std::array<std::size_t, 4> kSides{10, 20, 50, 100};
inline constexpr std::array<std::size_t, 4> kSteps{5, 10, 25, 100};
inline constexpr std::array<double, 4> kCapacities{4, 5, 6, 7};
inline constexpr std::array<double, 4> kResources{1.0, 1.5, 2.0, 2.5};

inline const char* pattern_label(Pattern p) {
  switch (p) {
    case Pattern::up: return "up centered";
    case Pattern::down: return "down centered";
    case Pattern::left: return "left centered";
    case Pattern::right: return "right centered";
    case Pattern::centered: return "centered";
    case Pattern::spread: return "spread";
  }
  return "";
}

inline EcSpace make_space() {
  Factor a{"a", {}, "cells"};
  for (auto v : kSides) a.values.push_back(std::to_string(v));
  Factor init{"A_init", {}, ""};
  for (auto p : kPatterns) init.values.emplace_back(pattern_label(p));
  Factor n{"n", {}, "steps"};
  for (auto v : kSteps) n.values.push_back(std::to_string(v));
  Factor l{"L", {}, ""};
  for (auto v : kCapacities) l.values.push_back(format_label(v));
  Factor s{"s", {}, ""};
  for (auto v : kResources) s.values.push_back(format_label(v));
  return EcSpace({a, init, n, l, s});
}

inline ColonyConfig config_from(const Config& c) {
  return {kSides.at(c[0]), kPatterns.at(c[1]), kSteps.at(c[2]), kCapacities.at(c[3]), kResources.at(c[4])};
}

}  // namespace axia::population
