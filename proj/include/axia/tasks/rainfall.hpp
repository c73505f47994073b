#pragma once

/// Synthetic hourly precipitation series and four regressors scored by
/// MSE / RMSE / MAE on a chronological hold-out.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "axia/ec_space.hpp"
#include "axia/rng.hpp"

namespace axia::rainfall {

inline constexpr double kAirDensity = 3.6;
inline constexpr double kLatentHeat = 2.5e6;
inline constexpr double kLapseRate = 0.006;
inline constexpr double kGasConstant = 461.0;
inline constexpr std::size_t kHours = 8760;
inline constexpr std::size_t kQuarter = 2190;
inline constexpr double kVaporNoiseScale = 0.1;
inline constexpr double kTrainFraction = 0.8;

struct RainConfig {
  double qs = 0.01;
  double w = 0.01;
  double temperature = 253.0;
  double sigma_w = 0.01;
  double sigma_t = 0.5;
  double sigma_r = 0.1;
};

/// Noise-free rate for the given multiplicative perturbations.
inline double rain_rate(const RainConfig& c, double eps, double eta, double xi, double nu) noexcept {
  const double temp = c.temperature + c.sigma_t * xi;
  return kAirDensity * c.qs * (1.0 + kVaporNoiseScale * eps) * kLatentHeat * kLapseRate * c.w * (1.0 + c.sigma_w * eta) /
             (kGasConstant * temp * temp) +
         c.sigma_r * nu;
}

/// `noise_gain` multiplies all four noise streams; 0 gives the deterministic rate.
inline std::vector<double> rainfall_series(const RainConfig& cfg, std::uint64_t seed, double noise_gain = 1.0) {
  Rng rng(seed);
  std::vector<double> r(kHours);
  for (std::size_t t = 0; t < kHours; ++t) {
    const double eps = rng.normal(), eta = rng.normal(), xi = rng.normal(), nu = rng.normal();
    r[t] = rain_rate(cfg, noise_gain * eps, noise_gain * eta, noise_gain * xi, noise_gain * nu);
  }
  return r;
}

/// Prefix of 2190 * rank hours.
inline std::span<const double> staggered_series(std::span<const double> series, std::size_t rank) {
  if (rank < 1 || rank > 4) throw std::out_of_range("stagger rank must be in 1..4");
  const std::size_t len = kQuarter * rank;
  if (series.size() < len) throw std::invalid_argument("series shorter than the staggered prefix");
  return series.first(len);
}

// ---------------------------------------------------------------------------
// Scores

struct Scores {
  double mse = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
};

inline Scores score(std::span<const double> truth, std::span<const double> pred) {
  if (truth.size() != pred.size() || truth.empty()) throw std::invalid_argument("score needs equal, non-empty inputs");
  double se = 0.0, ae = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double e = pred[i] - truth[i];
    se += e * e;
    ae += std::abs(e);
  }
  const auto n = static_cast<double>(truth.size());
  Scores s;
  s.mse = se / n;
  s.rmse = std::sqrt(s.mse);
  s.mae = ae / n;
  return s;
}

// ---------------------------------------------------------------------------
// Regressors

enum class Model { linear, spline_additive, tree_bagger, fourier_basis };
inline constexpr std::array<Model, 4> kModels{Model::linear, Model::spline_additive, Model::tree_bagger,
                                              Model::fourier_basis};

inline constexpr double kDay = 24.0;
inline constexpr double kYear = 8760.0;

namespace detail {

/// [1, sin/cos(2 pi k t / 24) for k <= daily, sin/cos(2 pi k t / 8760) for k <= yearly]
inline std::vector<double> harmonics(double t, int daily, int yearly) {
  std::vector<double> f{1.0};
  for (int k = 1; k <= daily; ++k) {
    const double a = 2.0 * std::numbers::pi * k * t / kDay;
    f.push_back(std::sin(a));
    f.push_back(std::cos(a));
  }
  for (int k = 1; k <= yearly; ++k) {
    const double a = 2.0 * std::numbers::pi * k * t / kYear;
    f.push_back(std::sin(a));
    f.push_back(std::cos(a));
  }
  return f;
}

struct Basis {
  int daily = 0;
  int yearly = 0;
  double lambda = 0.0;  // penalty scale; harmonic k is penalized by lambda * k^4
};

inline Basis basis_for(Model m) {
  switch (m) {
    case Model::linear:
      return {2, 2, 0.0};
    case Model::spline_additive:
      return {4, 2, 1e-3};
    case Model::fourier_basis:
      return {8, 0, 0.0};
    case Model::tree_bagger:
      break;
  }
  throw std::invalid_argument("model has no linear basis");
}

/// Linear smoother for a fixed basis and series length: coefficients are
/// `solve * y_train`, predictions `test * coefficients`.
struct LinearOperator {
  Eigen::MatrixXd solve;
  Eigen::MatrixXd test;
};

inline std::shared_ptr<const LinearOperator> build_operator(const Basis& b, std::size_t n_train, std::size_t n_test) {
  const auto p = static_cast<Eigen::Index>(harmonics(0.0, b.daily, b.yearly).size());
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n_train), p);
  Eigen::MatrixXd xt(static_cast<Eigen::Index>(n_test), p);
  for (std::size_t i = 0; i < n_train + n_test; ++i) {
    const auto f = harmonics(static_cast<double>(i), b.daily, b.yearly);
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i < n_train)
        x(static_cast<Eigen::Index>(i), j) = f[static_cast<std::size_t>(j)];
      else
        xt(static_cast<Eigen::Index>(i - n_train), j) = f[static_cast<std::size_t>(j)];
    }
  }
  Eigen::MatrixXd gram = x.transpose() * x;
  if (b.lambda > 0.0) {
    Eigen::Index col = 1;
    for (int k = 1; k <= b.daily; ++k, col += 2) {
      gram(col, col) += b.lambda * std::pow(k, 4);
      gram(col + 1, col + 1) += b.lambda * std::pow(k, 4);
    }
    for (int k = 1; k <= b.yearly; ++k, col += 2) {
      gram(col, col) += b.lambda * std::pow(k, 4);
      gram(col + 1, col + 1) += b.lambda * std::pow(k, 4);
    }
  }
  auto op = std::make_shared<LinearOperator>();
  op->solve = gram.ldlt().solve(x.transpose());
  op->test = std::move(xt);
  return op;
}

inline std::shared_ptr<const LinearOperator> cached_operator(Model m, std::size_t n_train, std::size_t n_test) {
  static std::mutex mu;
  static std::map<std::tuple<int, std::size_t, std::size_t>, std::shared_ptr<const LinearOperator>> cache;
  const auto key = std::make_tuple(static_cast<int>(m), n_train, n_test);
  std::lock_guard lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_operator(basis_for(m), n_train, n_test)).first;
  return it->second;
}

// Depth-limited regression trees over features [harmonics(2, 2) without the
// intercept, t / 8760]. Splits are searched over 16 fixed quantile thresholds
// per feature.

inline constexpr std::size_t kTrees = 25;
inline constexpr std::size_t kTreeDepth = 4;
inline constexpr std::size_t kBootstrap = 512;
inline constexpr std::size_t kThresholds = 16;

inline std::vector<double> tree_features(double t) {
  auto f = harmonics(t, 2, 2);
  f.erase(f.begin());
  f.push_back(t / kYear);
  return f;
}

struct TreeNode {
  std::size_t feature = 0;
  std::uint8_t bin = 0;  // left when the row's bin for `feature` is <= bin
  double value = 0.0;
  int left = -1;
  int right = -1;
};

/// Hourly features reduced to threshold bins: bin = number of thresholds
/// strictly below the value, so `value <= thresholds[b]` iff `bin <= b`.
struct TreeFeatures {
  std::size_t features = 0;
  std::vector<std::vector<double>> thresholds;  // per feature, ascending
  std::vector<std::uint8_t> bins;               // hour-major, `features` per hour

  std::uint8_t bin(std::size_t row, std::size_t f) const { return bins[row * features + f]; }
};

class Tree {
 public:
  double predict(const TreeFeatures& tf, std::size_t row) const {
    int i = 0;
    while (nodes_[static_cast<std::size_t>(i)].left >= 0) {
      const auto& n = nodes_[static_cast<std::size_t>(i)];
      i = tf.bin(row, n.feature) <= n.bin ? n.left : n.right;
    }
    return nodes_[static_cast<std::size_t>(i)].value;
  }

  static Tree grow(const TreeFeatures& tf, std::span<const double> y, std::vector<std::size_t> rows) {
    Tree t;
    t.split(tf, y, std::move(rows), 0);
    return t;
  }

 private:
  int split(const TreeFeatures& tf, std::span<const double> y, std::vector<std::size_t> rows, std::size_t depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    double sum = 0.0;
    for (auto r : rows) sum += y[r];
    nodes_.back().value = rows.empty() ? 0.0 : sum / static_cast<double>(rows.size());
    if (depth >= kTreeDepth || rows.size() < 4) return id;

    const double total_n = static_cast<double>(rows.size());
    double best_gain = 0.0;
    std::size_t best_f = 0;
    std::uint8_t best_bin = 0;
    std::array<double, kThresholds + 1> bin_sum;
    std::array<std::size_t, kThresholds + 1> bin_n;
    for (std::size_t f = 0; f < tf.features; ++f) {
      const std::size_t nthr = tf.thresholds[f].size();
      bin_sum.fill(0.0);
      bin_n.fill(0);
      for (auto r : rows) {
        const auto b = tf.bin(r, f);
        bin_sum[b] += y[r];
        ++bin_n[b];
      }
      double ls = 0.0;
      std::size_t ln = 0;
      for (std::size_t b = 0; b < nthr; ++b) {
        ls += bin_sum[b];
        ln += bin_n[b];
        if (ln == 0 || ln == rows.size()) continue;
        const double rs = sum - ls;
        const auto lnd = static_cast<double>(ln), rnd = total_n - lnd;
        const double gain = ls * ls / lnd + rs * rs / rnd - sum * sum / total_n;
        if (gain > best_gain) {
          best_gain = gain;
          best_f = f;
          best_bin = static_cast<std::uint8_t>(b);
        }
      }
    }
    if (best_gain <= 0.0) return id;

    std::vector<std::size_t> lo, hi;
    for (auto r : rows) (tf.bin(r, best_f) <= best_bin ? lo : hi).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    nodes_[static_cast<std::size_t>(id)].feature = best_f;
    nodes_[static_cast<std::size_t>(id)].bin = best_bin;
    const int l = split(tf, y, std::move(lo), depth + 1);
    const int r = split(tf, y, std::move(hi), depth + 1);
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  std::vector<TreeNode> nodes_;
};

inline const TreeFeatures& tree_feature_table() {
  static const TreeFeatures table = [] {
    TreeFeatures tf;
    std::vector<std::vector<double>> rows;
    rows.reserve(kHours);
    for (std::size_t t = 0; t < kHours; ++t) rows.push_back(tree_features(static_cast<double>(t)));
    tf.features = rows.front().size();
    for (std::size_t f = 0; f < tf.features; ++f) {
      std::vector<double> col;
      col.reserve(kHours);
      for (const auto& r : rows) col.push_back(r[f]);
      std::sort(col.begin(), col.end());
      std::vector<double> thr;
      for (std::size_t q = 1; q <= kThresholds; ++q) thr.push_back(col[q * (col.size() - 1) / (kThresholds + 1)]);
      thr.erase(std::unique(thr.begin(), thr.end()), thr.end());
      tf.thresholds.push_back(std::move(thr));
    }
    tf.bins.resize(kHours * tf.features);
    for (std::size_t t = 0; t < kHours; ++t)
      for (std::size_t f = 0; f < tf.features; ++f) {
        const auto& thr = tf.thresholds[f];
        tf.bins[t * tf.features + f] =
            static_cast<std::uint8_t>(std::lower_bound(thr.begin(), thr.end(), rows[t][f]) - thr.begin());
      }
    return tf;
  }();
  return table;
}

}  // namespace detail

/// Predictions for the last 20% of `series` after fitting on the first 80%.
inline std::vector<double> fit_predict(Model model, std::span<const double> series, std::uint64_t seed) {
  if (series.size() < 10) throw std::invalid_argument("series too short to split");
  const auto n_train = static_cast<std::size_t>(std::floor(kTrainFraction * static_cast<double>(series.size())));
  const std::size_t n_test = series.size() - n_train;
  std::vector<double> pred(n_test, 0.0);

  if (model != Model::tree_bagger) {
    const auto op = detail::cached_operator(model, n_train, n_test);
    const Eigen::Map<const Eigen::VectorXd> y(series.data(), static_cast<Eigen::Index>(n_train));
    const Eigen::VectorXd beta = op->solve * y;
    const Eigen::VectorXd yhat = op->test * beta;
    for (std::size_t i = 0; i < n_test; ++i) pred[i] = yhat(static_cast<Eigen::Index>(i));
    return pred;
  }

  const auto& tf = detail::tree_feature_table();
  Rng rng(derive_seed(seed, "rainfall.bagging"));
  const std::size_t sample = std::min(detail::kBootstrap, n_train);
  for (std::size_t b = 0; b < detail::kTrees; ++b) {
    std::vector<std::size_t> rows(sample);
    for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n_train));
    const auto tree = detail::Tree::grow(tf, series, std::move(rows));
    for (std::size_t i = 0; i < n_test; ++i) pred[i] += tree.predict(tf, n_train + i);
  }
  for (double& v : pred) v /= static_cast<double>(detail::kTrees);
  return pred;
}

inline Scores regressor_scores(Model model, std::span<const double> series, std::uint64_t seed) {
  const auto pred = fit_predict(model, series, seed);
  return score(series.subspan(series.size() - pred.size()), pred);
}

// ---------------------------------------------------------------------------
// EC space

inline constexpr std::array<double, 3> kQs{0.01, 0.02, 0.04};
inline constexpr std::array<double, 2> kW{0.01, 0.1};
inline constexpr std::array<double, 10> kT{253, 261, 269, 277, 285, 293, 301, 309, 317, 325};
inline constexpr std::array<double, 2> kSigmaW{0.01, 0.03};
inline constexpr std::array<double, 4> kSigmaT{0.5, 1.0, 1.5, 2.0};
inline constexpr std::array<double, 5> kSigmaR{0.1, 0.2, 0.3, 0.4, 0.5};

inline EcSpace make_space() {
  auto factor = [](const char* name, std::span<const double> vals, const char* unit) {
    Factor f{name, {}, unit};
    for (double v : vals) f.values.push_back(format_label(v));
    return f;
  };
  return EcSpace({factor("qS", kQs, ""), factor("w", kW, "m/s"), factor("T", kT, "K"),
                  factor("sigma_W", kSigmaW, ""), factor("sigma_T", kSigmaT, ""), factor("sigma_R", kSigmaR, "")});
}

inline RainConfig config_from(const Config& c) {
  return {kQs.at(c[0]), kW.at(c[1]), kT.at(c[2]), kSigmaW.at(c[3]), kSigmaT.at(c[4]), kSigmaR.at(c[5])};
}

}  // namespace axia::rainfall
