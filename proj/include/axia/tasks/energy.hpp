#pragma once

/// Material enumeration over M x X x Y x Z, bond-additive formation energies
/// and four predictor surrogates scored by MAPE / SMAPE.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "axia/ec_space.hpp"
#include "axia/rng.hpp"

namespace axia::energy {

enum class Pattern { x2, xyz, xz, xy2z };
inline constexpr std::array<Pattern, 4> kPatterns{Pattern::x2, Pattern::xyz, Pattern::xz, Pattern::xy2z};

// Terminal radicals (X and Z) and bridging groups (Y).
inline constexpr std::array<std::string_view, 6> kRadicals{"Na+", "-H", "-OH", "-CH3", "-NH2", "-C#N"};
inline constexpr std::array<std::string_view, 4> kBridges{"-O-", "-CH2-", "-NH-", "-C(=O)-"};
inline constexpr std::size_t kSodium = 0;

enum Element : std::size_t { Na, H, O, C, N, kElements };
inline constexpr std::array<std::string_view, kElements> kElementNames{"Na", "H", "O", "C", "N"};

/// Species energies (kJ/mol); indexes 0-5 are radicals, 6-9 bridges as =O, =CH2, =NH, =C=O.
inline constexpr std::array<double, 10> kSpeciesEnergy{0.0, 218.0, 4.2, 146.7, 190.0, 302.4, 249.2, 385.0, 260.0, 749.0};
inline constexpr std::array<std::string_view, 10> kSpeciesNames{"Na+", "-H",  "-OH", "-CH3", "-NH2",
                                                                 "-C#N", "=O", "=CH2", "=NH",  "=C=O"};

struct Bond {
  std::string_view label;
  Element a;
  Element b;
  double energy;
};

inline constexpr std::array<Bond, 14> kBonds{{{"H-H", H, H, -436.0},
                                              {"O-H", O, H, -463.0},
                                              {"C-H", C, H, -413.0},
                                              {"N-H", N, H, -391.0},
                                              {"C-C", C, C, -348.0},
                                              {"C-O", C, O, -358.0},
                                              {"C-N", C, N, -305.0},
                                              {"O-O", O, O, -142.0},
                                              {"O-N", O, N, -200.0},
                                              {"N-N", N, N, -163.0},
                                              {"Na-H", Na, H, -188.7},
                                              {"Na-O", Na, O, -260.0},
                                              {"Na-C", Na, C, -150.0},
                                              {"Na-N", Na, N, -243.0}}};

/// Atom through which a radical or bridge bonds to its neighbours.
inline constexpr std::array<Element, 6> kRadicalBondAtom{Na, H, O, C, N, C};
inline constexpr std::array<Element, 4> kBridgeBondAtom{O, C, N, C};

/// Element composition of each species (same order as kSpeciesEnergy).
inline constexpr std::array<std::array<int, kElements>, 10> kComposition{{
    {1, 0, 0, 0, 0},  // Na+
    {0, 1, 0, 0, 0},  // -H
    {0, 1, 1, 0, 0},  // -OH
    {0, 3, 0, 1, 0},  // -CH3
    {0, 2, 0, 0, 1},  // -NH2
    {0, 0, 0, 1, 1},  // -C#N
    {0, 0, 1, 0, 0},  // -O-
    {0, 2, 0, 1, 0},  // -CH2-
    {0, 1, 0, 0, 1},  // -NH-
    {0, 0, 1, 1, 0},  // -C(=O)-
}};

/// Index into kBonds for the bond between two atoms, or -1 when the table has none.
inline int bond_index(Element a, Element b) noexcept {
  for (std::size_t i = 0; i < kBonds.size(); ++i)
    if ((kBonds[i].a == a && kBonds[i].b == b) || (kBonds[i].a == b && kBonds[i].b == a)) return static_cast<int>(i);
  return -1;
}

struct Material {
  Pattern pattern = Pattern::x2;
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t z = 0;
  std::array<int, 10> species{};
  std::array<int, kBonds.size()> bonds{};
  std::array<int, kElements> atoms{};

  std::string formula() const {
    const std::string xs(kRadicals[x]);
    const std::string ys(kBridges[y]);
    const std::string zs(kRadicals[z]);
    switch (pattern) {
      case Pattern::x2: return xs + " " + xs;
      case Pattern::xz: return xs + " " + zs;
      case Pattern::xyz: return xs + " " + ys + " " + zs;
      case Pattern::xy2z: return xs + " " + ys + " " + ys + " " + zs;
    }
    return {};
  }
};

/// X2 is represented with y = z = 0 and XZ with y = 0; the remaining
/// combinations of those patterns are duplicates.
inline bool canonical(Pattern m, std::size_t y, std::size_t z) noexcept {
  if (m == Pattern::x2) return y == 0 && z == 0;
  if (m == Pattern::xz) return y == 0;
  return true;
}

/// Builds the species and bond counts; returns false when the material is not legal.
inline bool assemble(Pattern m, std::size_t x, std::size_t y, std::size_t z, Material& out) {
  out = Material{};
  out.pattern = m;
  out.x = x;
  out.y = y;
  out.z = z;
  std::vector<Element> chain;
  auto add_radical = [&](std::size_t r) {
    ++out.species[r];
    chain.push_back(kRadicalBondAtom[r]);
  };
  auto add_bridge = [&](std::size_t b) {
    ++out.species[6 + b];
    chain.push_back(kBridgeBondAtom[b]);
  };
  switch (m) {
    case Pattern::x2:
      add_radical(x);
      add_radical(x);
      break;
    case Pattern::xz:
      if (z == x) return false;
      add_radical(x);
      add_radical(z);
      break;
    case Pattern::xyz:
      if (z == x) return false;
      add_radical(x);
      add_bridge(y);
      add_radical(z);
      break;
    case Pattern::xy2z:
      if (z == x) return false;
      add_radical(x);
      add_bridge(y);
      add_bridge(y);
      add_radical(z);
      break;
  }
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const int b = bond_index(chain[i], chain[i + 1]);
    if (b < 0) return false;
    ++out.bonds[static_cast<std::size_t>(b)];
  }
  for (std::size_t s = 0; s < out.species.size(); ++s)
    for (std::size_t e = 0; e < kElements; ++e) out.atoms[e] += out.species[s] * kComposition[s][e];
  return true;
}

inline bool legal(Pattern m, std::size_t x, std::size_t y, std::size_t z) {
  if (!canonical(m, y, z)) return false;
  Material tmp;
  return assemble(m, x, y, z, tmp);
}

inline EcSpace make_space() {
  Factor m{"M", {"X2", "XYZ", "XZ", "XY2Z"}, ""};
  Factor x{"X", {}, ""};
  Factor z{"Z", {}, ""};
  for (auto r : kRadicals) {
    x.values.emplace_back(r);
    z.values.emplace_back(r);
  }
  Factor y{"Y", {}, ""};
  for (auto b : kBridges) y.values.emplace_back(b);
  return EcSpace({m, x, y, z},
                 [](const Config& c) { return legal(kPatterns.at(c[0]), c[1], c[2], c[3]); });
}

inline Material material_from(const Config& c) {
  Material m;
  if (!assemble(kPatterns.at(c[0]), c[1], c[2], c[3], m)) throw std::invalid_argument("illegal material");
  return m;
}

/// All legal materials in ordinal order.
inline std::vector<Material> enumerate_materials() {
  const EcSpace space = make_space();
  std::vector<Material> out;
  out.reserve(space.size());
  for (std::size_t o = 0; o < space.size(); ++o) out.push_back(material_from(space.config_at(o)));
  return out;
}

/// Sum of species energies plus the (negative) connecting-bond energies.
inline double formation_energy_exact(const Material& m) {
  double e = 0.0;
  for (std::size_t s = 0; s < m.species.size(); ++s) e += m.species[s] * kSpeciesEnergy[s];
  for (std::size_t b = 0; b < m.bonds.size(); ++b) e += m.bonds[b] * kBonds[b].energy;
  return e;
}

inline constexpr double kEnergyNoise = 2.0;

inline double formation_energy(const Material& m, std::uint64_t noise_seed, double noise_sigma = kEnergyNoise) {
  Rng rng(noise_seed);
  return formation_energy_exact(m) + noise_sigma * rng.normal();
}

inline void write_material_list(std::ostream& os, std::span<const Material> materials, std::span<const double> energies) {
  os << "formula,energy\n";
  for (std::size_t i = 0; i < materials.size(); ++i)
    os << materials[i].formula() << ',' << format_double(energies[i]) << '\n';
}

// ---------------------------------------------------------------------------
// Predictors

enum class Model { mean_by_pattern, bond_count_linear, least_squares, margin_regressor };
inline constexpr std::array<Model, 4> kModels{Model::mean_by_pattern, Model::bond_count_linear, Model::least_squares,
                                              Model::margin_regressor};

inline constexpr double kTrainFraction = 0.7;

namespace detail {

inline std::vector<double> bond_features(const Material& m) {
  std::vector<double> f;
  for (int s : m.species) f.push_back(s);
  for (int b : m.bonds) f.push_back(b);
  return f;
}

inline std::vector<double> composition_features(const Material& m) {
  std::vector<double> f;
  for (int a : m.atoms) f.push_back(a);
  for (auto p : kPatterns) f.push_back(m.pattern == p ? 1.0 : 0.0);
  return f;
}

inline Eigen::MatrixXd design(std::span<const Material> ms, std::span<const std::size_t> rows,
                              std::vector<double> (*feat)(const Material&)) {
  const auto p = static_cast<Eigen::Index>(feat(ms.front()).size());
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), p);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto f = feat(ms[rows[i]]);
    for (Eigen::Index j = 0; j < p; ++j) x(static_cast<Eigen::Index>(i), j) = f[static_cast<std::size_t>(j)];
  }
  return x;
}

inline Eigen::VectorXd targets(std::span<const double> y, std::span<const std::size_t> rows) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) v(static_cast<Eigen::Index>(i)) = y[rows[i]];
  return v;
}

inline std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> r(n);
  std::iota(r.begin(), r.end(), std::size_t{0});
  return r;
}

/// Linear epsilon-insensitive regression fitted by averaged SGD on
/// standardized features.
inline std::vector<double> margin_regression(std::span<const Material> ms, std::span<const double> y,
                                             std::span<const std::size_t> train, std::uint64_t seed) {
  constexpr double kEpsilon = 5.0;
  constexpr double kL2 = 1e-4;
  constexpr std::size_t kEpochs = 200;
  auto feat = [](const Material& m) {
    auto f = composition_features(m);
    for (int s : m.species) f.push_back(s);
    return f;
  };
  const std::size_t p = feat(ms.front()).size();
  std::vector<double> mu(p, 0.0), sd(p, 0.0);
  for (auto r : train) {
    const auto f = feat(ms[r]);
    for (std::size_t j = 0; j < p; ++j) mu[j] += f[j];
  }
  for (double& v : mu) v /= static_cast<double>(train.size());
  for (auto r : train) {
    const auto f = feat(ms[r]);
    for (std::size_t j = 0; j < p; ++j) sd[j] += (f[j] - mu[j]) * (f[j] - mu[j]);
  }
  for (double& v : sd) v = std::sqrt(v / static_cast<double>(train.size()));
  auto standard = [&](const Material& m) {
    auto f = feat(m);
    for (std::size_t j = 0; j < p; ++j) f[j] = sd[j] > 0.0 ? (f[j] - mu[j]) / sd[j] : 0.0;
    return f;
  };
  double ymu = 0.0;
  for (auto r : train) ymu += y[r];
  ymu /= static_cast<double>(train.size());

  std::vector<double> w(p, 0.0), wavg(p, 0.0);
  double b = 0.0, bavg = 0.0;
  std::vector<std::size_t> order(train.begin(), train.end());
  Rng rng(seed);
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < kEpochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    const double lr = 0.05 / (1.0 + 0.05 * static_cast<double>(epoch));
    for (auto r : order) {
      const auto f = standard(ms[r]);
      double pred = b;
      for (std::size_t j = 0; j < p; ++j) pred += w[j] * f[j];
      const double resid = (y[r] - ymu) - pred;
      const double g = resid > kEpsilon ? -1.0 : (resid < -kEpsilon ? 1.0 : 0.0);
      const double scale = std::max(1.0, std::abs(resid) / 100.0);
      for (std::size_t j = 0; j < p; ++j) w[j] -= lr * (g * scale * f[j] + kL2 * w[j]);
      b -= lr * g * scale;
      ++step;
      const double k = 1.0 / static_cast<double>(step);
      for (std::size_t j = 0; j < p; ++j) wavg[j] += k * (w[j] - wavg[j]);
      bavg += k * (b - bavg);
    }
  }
  std::vector<double> out(ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto f = standard(ms[i]);
    double pred = bavg + ymu;
    for (std::size_t j = 0; j < p; ++j) pred += wavg[j] * f[j];
    out[i] = pred;
  }
  return out;
}

}  // namespace detail

/// Random 70/30 split of material indices: {train, test}, each ascending.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n,
                                                                                   std::uint64_t split_seed) {
  Rng rng(split_seed);
  auto sample = sample_ordinals_without_replacement(n, static_cast<std::size_t>(std::round(kTrainFraction * n)), rng);
  std::sort(sample.begin(), sample.end());
  std::vector<std::size_t> test;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (k < sample.size() && sample[k] == i)
      ++k;
    else
      test.push_back(i);
  }
  return {std::move(sample), std::move(test)};
}

/// Predictions for every material from a model fitted on the `train` rows.
inline std::vector<double> fit_predict(Model model, std::span<const Material> ms, std::span<const double> y,
                                       std::span<const std::size_t> train, std::uint64_t seed) {
  if (ms.size() != y.size() || train.empty()) throw std::invalid_argument("inconsistent training data");
  const auto all = detail::all_rows(ms.size());
  std::vector<double> out(ms.size(), 0.0);
  switch (model) {
    case Model::mean_by_pattern: {
      std::array<double, 4> sum{};
      std::array<std::size_t, 4> cnt{};
      double total = 0.0;
      for (auto r : train) {
        sum[static_cast<std::size_t>(ms[r].pattern)] += y[r];
        ++cnt[static_cast<std::size_t>(ms[r].pattern)];
        total += y[r];
      }
      const double overall = total / static_cast<double>(train.size());
      for (std::size_t i = 0; i < ms.size(); ++i) {
        const auto k = static_cast<std::size_t>(ms[i].pattern);
        out[i] = cnt[k] ? sum[k] / static_cast<double>(cnt[k]) : overall;
      }
      return out;
    }
    case Model::bond_count_linear: {
      const Eigen::MatrixXd x = detail::design(ms, train, detail::bond_features);
      Eigen::MatrixXd gram = x.transpose() * x;
      gram.diagonal().array() += 1e-8;
      const Eigen::VectorXd beta = gram.ldlt().solve(x.transpose() * detail::targets(y, train));
      const Eigen::VectorXd pred = detail::design(ms, all, detail::bond_features) * beta;
      for (std::size_t i = 0; i < ms.size(); ++i) out[i] = pred(static_cast<Eigen::Index>(i));
      return out;
    }
    case Model::least_squares: {
      const Eigen::MatrixXd x = detail::design(ms, train, detail::composition_features);
      const Eigen::VectorXd beta = x.colPivHouseholderQr().solve(detail::targets(y, train));
      const Eigen::VectorXd pred = detail::design(ms, all, detail::composition_features) * beta;
      for (std::size_t i = 0; i < ms.size(); ++i) out[i] = pred(static_cast<Eigen::Index>(i));
      return out;
    }
    case Model::margin_regressor:
      return detail::margin_regression(ms, y, train, derive_seed(seed, "energy.sgd"));
  }
  return out;
}

inline double abs_percentage_error(double pred, double truth) noexcept {
  return std::abs(pred - truth) / std::max(std::abs(truth), 1.0);
}

inline double sym_percentage_error(double pred, double truth) noexcept {
  return 2.0 * std::abs(pred - truth) / (std::abs(pred) + std::abs(truth) + 1.0);
}

struct Scores {
  double mape = 0.0;
  double smape = 0.0;
};

inline Scores score(std::span<const double> pred, std::span<const double> truth, std::span<const std::size_t> rows) {
  if (rows.empty()) throw std::invalid_argument("no rows to score");
  Scores s;
  for (auto r : rows) {
    s.mape += abs_percentage_error(pred[r], truth[r]);
    s.smape += sym_percentage_error(pred[r], truth[r]);
  }
  s.mape /= static_cast<double>(rows.size());
  s.smape /= static_cast<double>(rows.size());
  return s;
}

/// Test-set MAPE / SMAPE of `model` on a 70/30 split.
inline Scores predictor_scores(Model model, std::span<const Material> ms, std::span<const double> energies,
                               std::uint64_t split_seed) {
  const auto [train, test] = split_indices(ms.size(), split_seed);
  const auto pred = fit_predict(model, ms, energies, train, split_seed);
  return score(pred, energies, test);
}

}  // namespace axia::energy
