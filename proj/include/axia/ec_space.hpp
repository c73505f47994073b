#pragma once

/// Factorized evaluation-condition spaces.
///
/// An `EcSpace` is an ordered list of factors, each with an ordered list of
/// values, optionally restricted by a feasibility predicate. Configurations
/// are addressed by ordinals in mixed-radix order with the first factor most
/// significant; when a constraint is present, ordinals index only the
/// feasible configurations, in the same relative order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "axia/errors.hpp"
#include "axia/rng.hpp"

namespace axia {

struct Factor {
  std::string name;
  std::vector<std::string> values;
  std::string unit;

  std::size_t size() const noexcept { return values.size(); }
};

struct Config {
  std::vector<std::size_t> indices;

  std::size_t operator[](std::size_t factor) const { return indices[factor]; }
  friend bool operator==(const Config&, const Config&) = default;
  friend auto operator<=>(const Config&, const Config&) = default;
};

class EcSpace {
 public:
  using Constraint = std::function<bool(const Config&)>;

  EcSpace() = default;

  explicit EcSpace(std::vector<Factor> factors, Constraint constraint = {})
      : factors_(std::move(factors)), constraint_(std::move(constraint)) {
    if (factors_.empty()) throw std::invalid_argument("EC space needs at least one factor");
    std::set<std::string> names;
    raw_size_ = 1;
    for (const auto& f : factors_) {
      if (f.name.empty()) throw std::invalid_argument("factor name must not be empty");
      if (!names.insert(f.name).second) throw std::invalid_argument("duplicate factor name: " + f.name);
      if (f.values.empty()) throw std::invalid_argument("factor '" + f.name + "' has no values");
      std::set<std::string> seen(f.values.begin(), f.values.end());
      if (seen.size() != f.values.size())
        throw std::invalid_argument("factor '" + f.name + "' has repeated values");
      raw_size_ *= f.values.size();
    }
    if (constraint_) {
      for (std::size_t raw = 0; raw < raw_size_; ++raw) {
        if (constraint_(decode(raw))) feasible_.push_back(raw);
      }
      if (feasible_.empty()) throw std::invalid_argument("constraint excludes every configuration");
    }
  }

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  const Factor& factor(std::size_t i) const { return factors_.at(i); }
  std::size_t dimension() const noexcept { return factors_.size(); }
  bool constrained() const noexcept { return static_cast<bool>(constraint_); }
  const Constraint& constraint() const noexcept { return constraint_; }

  /// Number of feasible configurations.
  std::size_t size() const noexcept { return constraint_ ? feasible_.size() : raw_size_; }

  std::size_t find_factor(std::string_view name) const {
    for (std::size_t i = 0; i < factors_.size(); ++i)
      if (factors_[i].name == name) return i;
    throw std::out_of_range("no factor named '" + std::string(name) + "'");
  }

  Config config_at(std::size_t ordinal) const {
    if (ordinal >= size()) throw std::out_of_range("configuration ordinal out of range");
    return decode(constraint_ ? feasible_[ordinal] : ordinal);
  }

  std::size_t ordinal_of(const Config& config) const {
    const std::size_t raw = raw_ordinal(config);
    if (!constraint_) return raw;
    auto it = std::lower_bound(feasible_.begin(), feasible_.end(), raw);
    if (it == feasible_.end() || *it != raw) throw std::out_of_range("configuration violates the space constraint");
    return static_cast<std::size_t>(it - feasible_.begin());
  }

  bool contains(const Config& config) const {
    if (config.indices.size() != factors_.size()) return false;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      if (config.indices[i] >= factors_[i].size()) return false;
    return !constraint_ || constraint_(config);
  }

  const std::string& value_label(const Config& config, std::size_t factor) const {
    return factors_.at(factor).values.at(config.indices.at(factor));
  }

 private:
  Config decode(std::size_t raw) const {
    Config c;
    c.indices.resize(factors_.size());
    for (std::size_t i = factors_.size(); i-- > 0;) {
      c.indices[i] = raw % factors_[i].size();
      raw /= factors_[i].size();
    }
    return c;
  }

  std::size_t raw_ordinal(const Config& config) const {
    if (config.indices.size() != factors_.size()) throw std::out_of_range("configuration has wrong dimension");
    std::size_t raw = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (config.indices[i] >= factors_[i].size()) throw std::out_of_range("factor index out of range");
      raw = raw * factors_[i].size() + config.indices[i];
    }
    return raw;
  }

  std::vector<Factor> factors_;
  Constraint constraint_;
  std::size_t raw_size_ = 0;
  std::vector<std::size_t> feasible_;
};

// ---------------------------------------------------------------------------
// Factor distributions

enum class DistributionFamily { uniform, power, gaussian, mixed_log, custom };

inline std::string_view to_string(DistributionFamily f) {
  switch (f) {
    case DistributionFamily::uniform: return "uniform";
    case DistributionFamily::power: return "power";
    case DistributionFamily::gaussian: return "gaussian";
    case DistributionFamily::mixed_log: return "mixed-log";
    case DistributionFamily::custom: return "custom";
  }
  return "?";
}

inline DistributionFamily parse_distribution_family(std::string_view s) {
  if (s == "uniform") return DistributionFamily::uniform;
  if (s == "power") return DistributionFamily::power;
  if (s == "gaussian") return DistributionFamily::gaussian;
  if (s == "mixed-log" || s == "mixed_log") return DistributionFamily::mixed_log;
  if (s == "custom") return DistributionFamily::custom;
  throw UsageError("unknown distribution family '" + std::string(s) + "'");
}

/// Independent per-factor weights; the joint weight of a configuration is
/// the product of its per-factor weights.
class FactorDistribution {
 public:
  FactorDistribution(DistributionFamily family, std::vector<std::vector<double>> weights)
      : family_(family), weights_(std::move(weights)) {
    for (const auto& w : weights_) {
      if (w.empty()) throw std::invalid_argument("empty weight vector");
      double total = 0.0;
      for (double x : w) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("weights must be finite and non-negative");
        total += x;
      }
      if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("weights must sum to 1");
    }
  }

  /// Per-factor weights of the named family for every factor of `space`.
  ///   power:     w_k proportional to (k+1)^-2
  ///   gaussian:  discretized normal on the middle index, sigma = cardinality / 4
  ///   mixed-log: 0.5 uniform + 0.5 (w_k proportional to 1 / (1 + ln(k+1)))
  static FactorDistribution make(DistributionFamily family, const EcSpace& space) {
    if (family == DistributionFamily::custom) throw std::invalid_argument("custom weights must be given explicitly");
    std::vector<std::vector<double>> all;
    for (const auto& f : space.factors()) all.push_back(family_weights(family, f.size()));
    return FactorDistribution(family, std::move(all));
  }

  static std::vector<double> family_weights(DistributionFamily family, std::size_t m) {
    std::vector<double> w(m, 1.0);
    switch (family) {
      case DistributionFamily::uniform:
      case DistributionFamily::custom:
        break;
      case DistributionFamily::power:
        for (std::size_t k = 0; k < m; ++k) w[k] = 1.0 / static_cast<double>((k + 1) * (k + 1));
        break;
      case DistributionFamily::gaussian: {
        const double centre = (static_cast<double>(m) - 1.0) / 2.0;
        const double sigma = static_cast<double>(m) / 4.0;
        for (std::size_t k = 0; k < m; ++k) {
          const double d = (static_cast<double>(k) - centre) / sigma;
          w[k] = std::exp(-0.5 * d * d);
        }
        break;
      }
      case DistributionFamily::mixed_log: {
        std::vector<double> lg(m);
        for (std::size_t k = 0; k < m; ++k) lg[k] = 1.0 / (1.0 + std::log(static_cast<double>(k + 1)));
        const double s = std::accumulate(lg.begin(), lg.end(), 0.0);
        for (std::size_t k = 0; k < m; ++k) w[k] = 0.5 / static_cast<double>(m) + 0.5 * lg[k] / s;
        return w;
      }
    }
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= s;
    return w;
  }

  DistributionFamily family() const noexcept { return family_; }
  const std::vector<std::vector<double>>& weights() const noexcept { return weights_; }

  bool matches(const EcSpace& space) const {
    if (weights_.size() != space.dimension()) return false;
    for (std::size_t i = 0; i < weights_.size(); ++i)
      if (weights_[i].size() != space.factor(i).size()) return false;
    return true;
  }

  double joint_weight(const Config& config) const {
    double w = 1.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) w *= weights_[i].at(config.indices.at(i));
    return w;
  }

  /// Index of the largest weight of a factor (lowest index on ties).
  std::size_t mode(std::size_t factor) const {
    const auto& w = weights_.at(factor);
    return static_cast<std::size_t>(std::max_element(w.begin(), w.end()) - w.begin());
  }

 private:
  DistributionFamily family_;
  std::vector<std::vector<double>> weights_;
};

// ---------------------------------------------------------------------------
// Sampling

/// `n` distinct ordinals from [0, size), by partial Fisher-Yates.
inline std::vector<std::size_t> sample_ordinals_without_replacement(std::size_t size, std::size_t n, Rng& rng) {
  if (n > size) throw UsageError("sample size exceeds the population");
  std::vector<std::size_t> pool(size);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(size - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  return pool;
}

inline std::vector<Config> sample_uniform_without_replacement(const EcSpace& space, std::size_t n, std::uint64_t seed) {
  if (n < 1 || n > space.size()) throw UsageError("sample size must be in [1, space size]");
  Rng rng(seed);
  std::vector<Config> out;
  out.reserve(n);
  for (std::size_t o : sample_ordinals_without_replacement(space.size(), n, rng)) out.push_back(space.config_at(o));
  return out;
}

namespace detail {
inline std::size_t draw_index(const std::vector<double>& weights, Rng& rng) {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    if (u < acc) return k;
  }
  // Rounding left u above the running total; take the last positive weight.
  for (std::size_t k = weights.size(); k-- > 0;)
    if (weights[k] > 0.0) return k;
  return 0;
}
}  // namespace detail

/// `n` configurations drawn with replacement; constraint-infeasible draws are redrawn.
inline std::vector<Config> sample_weighted(const EcSpace& space, const FactorDistribution& dist, std::size_t n,
                                           std::uint64_t seed) {
  if (!dist.matches(space)) throw std::invalid_argument("distribution shape does not match the space");
  Rng rng(seed);
  std::vector<Config> out;
  out.reserve(n);
  Config c;
  c.indices.resize(space.dimension());
  while (out.size() < n) {
    for (std::size_t f = 0; f < space.dimension(); ++f) c.indices[f] = detail::draw_index(dist.weights()[f], rng);
    if (!space.constrained() || space.constraint()(c)) out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format
//
//   axia-space 1
//   factor <name>
//   unit <text>          (optional)
//   value <text>         (one line per value, in order)
//   weight <number>      (optional; one per value when present)
//   end
//
// Weights are written with 17 significant digits, so save(load(text)) == text
// for any text this writer produced.

struct SpaceDefinition {
  std::vector<Factor> factors;
  std::optional<std::vector<std::vector<double>>> weights;
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Short human-readable form for factor value labels.
inline std::string format_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline void write_space_block(std::ostream& os, const std::vector<Factor>& factors,
                              const std::vector<std::vector<double>>* weights) {
  os << "axia-space 1\n";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& f = factors[i];
    os << "factor " << f.name << '\n';
    if (!f.unit.empty()) os << "unit " << f.unit << '\n';
    for (const auto& v : f.values) os << "value " << v << '\n';
    if (weights)
      for (double w : (*weights)[i]) os << "weight " << format_double(w) << '\n';
    os << "end\n";
  }
}

inline std::string save_space_text(const std::vector<Factor>& factors,
                                   const std::vector<std::vector<double>>* weights = nullptr) {
  for (const auto& f : factors) {
    for (const auto& v : f.values)
      if (v.find('\n') != std::string::npos || v.empty()) throw std::invalid_argument("factor values must be single-line and non-empty");
  }
  std::ostringstream os;
  write_space_block(os, factors, weights);
  return os.str();
}

inline std::string save_space_text(const EcSpace& space, const FactorDistribution* dist = nullptr) {
  return save_space_text(space.factors(), dist ? &dist->weights() : nullptr);
}

namespace detail {
inline bool split_keyword(const std::string& line, std::string& key, std::string& rest) {
  const auto sp = line.find(' ');
  if (sp == std::string::npos) {
    key = line;
    rest.clear();
    return true;
  }
  key = line.substr(0, sp);
  rest = line.substr(sp + 1);
  return true;
}

inline double parse_double_strict(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DataError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw DataError("not a number: '" + s + "'");
  return v;
}
}  // namespace detail

/// Parses lines from `is` up to end of stream. Lines before `axia-space` are rejected.
inline SpaceDefinition parse_space_text(std::istream& is) {
  SpaceDefinition def;
  std::string line, key, rest;
  bool header = false;
  bool in_factor = false;
  std::vector<std::vector<double>> weights;
  bool any_weights = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    detail::split_keyword(line, key, rest);
    if (!header) {
      if (key != "axia-space" || rest != "1") throw DataError("expected 'axia-space 1' header");
      header = true;
      continue;
    }
    if (key == "factor") {
      if (in_factor) throw DataError("missing 'end' before factor '" + rest + "'");
      def.factors.push_back(Factor{rest, {}, {}});
      weights.emplace_back();
      in_factor = true;
    } else if (!in_factor) {
      throw DataError("unexpected line outside factor block: " + line);
    } else if (key == "unit") {
      def.factors.back().unit = rest;
    } else if (key == "value") {
      def.factors.back().values.push_back(rest);
    } else if (key == "weight") {
      weights.back().push_back(detail::parse_double_strict(rest));
      any_weights = true;
    } else if (key == "end") {
      in_factor = false;
    } else {
      throw DataError("unknown keyword '" + key + "'");
    }
  }
  if (!header) throw DataError("empty space definition");
  if (in_factor) throw DataError("unterminated factor block");
  if (any_weights) {
    for (std::size_t i = 0; i < def.factors.size(); ++i)
      if (weights[i].size() != def.factors[i].values.size())
        throw DataError("factor '" + def.factors[i].name + "' weight count does not match its values");
    def.weights = std::move(weights);
  }
  return def;
}

inline SpaceDefinition parse_space_text(std::string_view text) {
  std::istringstream is{std::string(text)};
  return parse_space_text(is);
}

inline SpaceDefinition read_space_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open space file " + path);
  return parse_space_text(in);
}

inline void write_space_file(const std::string& path, const EcSpace& space, const FactorDistribution* dist = nullptr) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write space file " + path);
  out << save_space_text(space, dist);
}

}  // namespace axia
