#pragma once

/// The eleven evaluation methods. Each turns a result table, an object, an
/// index and a seed into an `Estimate` whose cost is the number of
/// (configuration, repetition) reads it performed.
///
/// Method strings: `kind[:key=value[,key=value...]]` with keys
///   budget  sampled configurations (eva, obs, rct, qe_nrct, qe_stagger)
///   l       levels per factor, 3 or 4 (doe_lk, default 4)
///   p       fraction exponent >= 1 (doe_2kmp, default 1)
///   r       repetitions read per run (DoE kinds; doe_2kr defaults to the table's)
///   mask    masked factor (ci_scm: abc, xyz, sigma_W, sigma_T, sigma_R)
///   dist    uniform | power | gaussian | mixed-log (obs, ci_scm)
///   task    task the spec is meant for (checked against the table)

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "axia/catalog.hpp"
#include "axia/ec_space.hpp"
#include "axia/errors.hpp"
#include "axia/result_table.hpp"
#include "axia/rng.hpp"
#include "axia/stats.hpp"

namespace axia {

enum class MethodKind { obs, doe_2k, doe_2kr, doe_2kmp, doe_lk, rct, ci_do, ci_scm, qe_nrct, qe_stagger, eva };

inline constexpr std::array<MethodKind, 11> kMethodKinds{
    MethodKind::obs, MethodKind::doe_2k, MethodKind::doe_2kr,    MethodKind::doe_2kmp,   MethodKind::doe_lk, MethodKind::rct,
    MethodKind::ci_do, MethodKind::ci_scm, MethodKind::qe_nrct, MethodKind::qe_stagger, MethodKind::eva};

inline std::string_view to_string(MethodKind k) {
  switch (k) {
    case MethodKind::obs: return "obs";
    case MethodKind::doe_2k: return "doe_2k";
    case MethodKind::doe_2kr: return "doe_2kr";
    case MethodKind::doe_2kmp: return "doe_2kmp";
    case MethodKind::doe_lk: return "doe_lk";
    case MethodKind::rct: return "rct";
    case MethodKind::ci_do: return "ci_do";
    case MethodKind::ci_scm: return "ci_scm";
    case MethodKind::qe_nrct: return "qe_nrct";
    case MethodKind::qe_stagger: return "qe_stagger";
    case MethodKind::eva: return "eva";
  }
  return "";
}

inline MethodKind parse_method_kind(std::string_view s) {
  for (auto k : kMethodKinds)
    if (to_string(k) == s) return k;
  throw UsageError("unknown method '" + std::string(s) + "'");
}

inline bool is_doe(MethodKind k) noexcept {
  return k == MethodKind::doe_2k || k == MethodKind::doe_2kr || k == MethodKind::doe_2kmp || k == MethodKind::doe_lk;
}

inline bool is_budgeted(MethodKind k) noexcept {
  return k == MethodKind::eva || k == MethodKind::obs || k == MethodKind::rct || k == MethodKind::qe_nrct ||
         k == MethodKind::qe_stagger;
}

struct MethodSpec {
  MethodKind kind = MethodKind::eva;
  std::optional<std::size_t> budget;
  std::size_t l = 4;
  std::size_t p = 1;
  std::optional<std::size_t> r;
  std::optional<std::string> mask;
  std::optional<DistributionFamily> dist;
  std::optional<int> task;
};

inline std::string to_string(const MethodSpec& s) {
  std::string out(to_string(s.kind));
  std::vector<std::string> kv;
  if (s.budget) kv.push_back("budget=" + std::to_string(*s.budget));
  if (s.kind == MethodKind::doe_lk) kv.push_back("l=" + std::to_string(s.l));
  if (s.kind == MethodKind::doe_2kmp) kv.push_back("p=" + std::to_string(s.p));
  if (s.r) kv.push_back("r=" + std::to_string(*s.r));
  if (s.mask) kv.push_back("mask=" + *s.mask);
  if (s.dist) kv.push_back("dist=" + std::string(to_string(*s.dist)));
  if (s.task) kv.push_back("task=" + std::to_string(*s.task));
  for (std::size_t i = 0; i < kv.size(); ++i) out += (i == 0 ? ":" : ",") + kv[i];
  return out;
}

inline MethodSpec parse_method_spec(std::string_view text) {
  MethodSpec s;
  const auto colon = text.find(':');
  s.kind = parse_method_kind(text.substr(0, colon));
  if (colon == std::string_view::npos) return s;
  std::string_view rest = text.substr(colon + 1);
  if (rest.empty()) throw UsageError("empty parameter list in '" + std::string(text) + "'");
  auto count = [&](std::string_view key, std::string_view v) -> std::size_t {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string_view::npos)
      throw UsageError(std::string(key) + " must be a non-negative integer");
    return static_cast<std::size_t>(std::stoull(std::string(v)));
  };
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw UsageError("expected key=value, got '" + std::string(item) + "'");
    const std::string_view key = item.substr(0, eq), val = item.substr(eq + 1);
    if (key == "budget") {
      if (!is_budgeted(s.kind)) throw UsageError("budget does not apply to " + std::string(to_string(s.kind)));
      s.budget = count(key, val);
      if (*s.budget < 1) throw UsageError("budget must be at least 1");
    } else if (key == "l") {
      if (s.kind != MethodKind::doe_lk) throw UsageError("l applies to doe_lk only");
      s.l = count(key, val);
      if (s.l != 3 && s.l != 4) throw UsageError("l must be 3 or 4");
    } else if (key == "p") {
      if (s.kind != MethodKind::doe_2kmp) throw UsageError("p applies to doe_2kmp only");
      s.p = count(key, val);
      if (s.p < 1) throw UsageError("p must be at least 1");
    } else if (key == "r") {
      if (!is_doe(s.kind)) throw UsageError("r applies to DoE methods only");
      s.r = count(key, val);
      if (*s.r < 1) throw UsageError("r must be at least 1");
    } else if (key == "mask") {
      if (s.kind != MethodKind::ci_scm) throw UsageError("mask applies to ci_scm only");
      s.mask = std::string(val);
    } else if (key == "dist") {
      if (s.kind != MethodKind::obs && s.kind != MethodKind::ci_scm)
        throw UsageError("dist applies to obs and ci_scm only");
      try {
        s.dist = parse_distribution_family(val);
      } catch (const std::exception& e) {
        throw UsageError(e.what());
      }
      if (*s.dist == DistributionFamily::custom) throw UsageError("custom weights cannot be named in a method string");
    } else if (key == "task") {
      const auto t = count(key, val);
      if (t < 1) throw UsageError("task must be positive");
      s.task = static_cast<int>(t);
    } else {
      throw UsageError("unknown method parameter '" + std::string(key) + "'");
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Applicability

/// The evaluation-design matrix for tasks 1-8.
inline bool design_matrix_allows(MethodKind k, int task) {
  if (!is_known_task(task)) return true;
  const auto in = [task](std::initializer_list<int> ts) { return std::find(ts.begin(), ts.end(), task) != ts.end(); };
  switch (k) {
    case MethodKind::obs: return in({1, 2, 3});
    case MethodKind::doe_2k: return in({1, 2, 3, 5, 6, 7, 8});
    case MethodKind::doe_2kr: return in({7, 8});
    case MethodKind::doe_2kmp: return in({3, 5});
    case MethodKind::doe_lk: return in({1, 3, 5, 6, 7});
    case MethodKind::ci_scm: return in({1, 2});
    case MethodKind::qe_nrct: return in({4, 6});
    case MethodKind::qe_stagger: return in({2});
    case MethodKind::rct:
    case MethodKind::ci_do:
    case MethodKind::eva: return true;
  }
  return false;
}

inline std::vector<std::string> scm_masks(int task) {
  if (task == 1) return {"abc", "xyz"};
  if (task == 2) return {"sigma_W", "sigma_T", "sigma_R"};
  return {};
}

struct MethodInputs {
  const ResultTable& table;
  const ResultTable* staggered = nullptr;
};

[[noreturn]] inline void not_applicable(const MethodSpec& s, int task, const std::string& why) {
  throw NotApplicable(std::string(to_string(s.kind)) + " is not applicable to task " + std::to_string(task) + ": " +
                      why);
}

/// The table-independent part of the applicability check.
inline void check_design_matrix(const MethodSpec& s, int task) {
  if (s.task && *s.task != task)
    throw UsageError("method is declared for task " + std::to_string(*s.task) + " but the table is task " +
                     std::to_string(task));
  if (!design_matrix_allows(s.kind, task)) not_applicable(s, task, "marked N/A in the evaluation-design matrix");
}

inline void check_applicable(const MethodSpec& s, const MethodInputs& in) {
  const ResultTable& t = in.table;
  const int task = t.task();
  check_design_matrix(s, task);
  const EcSpace& space = t.space();
  if (is_doe(s.kind)) {
    if (space.constrained()) not_applicable(s, task, "the EC space has infeasible combinations");
    const std::size_t need = s.kind == MethodKind::doe_lk ? s.l : 2;
    for (const auto& f : space.factors())
      if (f.size() < need)
        not_applicable(s, task, "factor '" + f.name + "' has fewer than " + std::to_string(need) + " values");
    if (s.kind == MethodKind::doe_2kmp && s.p >= space.dimension())
      not_applicable(s, task, "p must be smaller than the number of factors");
    if (s.r && *s.r > t.repetitions()) throw UsageError("r exceeds the table's stored repetitions");
  }
  if (s.kind == MethodKind::obs && !s.dist && !(is_known_task(task) && task_info(task).observation))
    not_applicable(s, task, "no observation distribution is declared");
  if (s.kind == MethodKind::ci_scm) {
    const auto masks = scm_masks(task);
    if (masks.empty()) not_applicable(s, task, "no causal diagram is defined");
    if (s.mask && std::find(masks.begin(), masks.end(), *s.mask) == masks.end())
      throw UsageError("mask '" + *s.mask + "' is not maskable for task " + std::to_string(task));
  }
  if (s.kind == MethodKind::qe_nrct && task != 4 && task != 6) not_applicable(s, task, "no partition is defined");
  if (s.kind == MethodKind::qe_stagger) {
    if (task != 2) not_applicable(s, task, "only time-series tasks can be staggered");
    if (!in.staggered) throw DataError("staggered table is required for qe_stagger");
  }
}

inline bool applicable(const MethodSpec& s, const MethodInputs& in) {
  try {
    check_applicable(s, in);
    return true;
  } catch (const NotApplicable&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Reading with cost accounting

class TableReader {
 public:
  TableReader(const ResultTable& t, std::size_t reps) : table_(t), reps_(reps) {
    if (reps_ < 1 || reps_ > t.repetitions()) throw UsageError("repetitions out of range for this table");
  }

  double value(std::size_t config, std::size_t object, std::size_t index) {
    cost_ += reps_;
    return table_.config_value(config, object, index, reps_);
  }

  std::size_t cost() const noexcept { return cost_; }

 private:
  const ResultTable& table_;
  std::size_t reps_;
  std::size_t cost_ = 0;
};

namespace detail {

inline Estimate estimate_over(TableReader& reader, const std::vector<std::size_t>& ordinals, std::size_t object,
                              std::size_t index) {
  std::vector<double> v;
  v.reserve(ordinals.size());
  for (auto o : ordinals) v.push_back(reader.value(o, object, index));
  const auto ms = mean_std(v);
  return {ms.mean, ms.std, ordinals.size(), reader.cost()};
}

inline std::vector<std::size_t> sorted_sample(std::size_t size, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  auto s = sample_ordinals_without_replacement(size, n, rng);
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace detail

inline Estimate eva_estimate(const ResultTable& t, std::size_t object, std::size_t index, std::size_t budget,
                             std::uint64_t seed) {
  if (budget < 1 || budget > t.configs()) throw UsageError("budget must be in [1, space size]");
  TableReader reader(t, t.repetitions());
  return detail::estimate_over(reader, detail::sorted_sample(t.configs(), budget, seed), object, index);
}

inline FactorDistribution observation_distribution(const MethodSpec& s, const ResultTable& t) {
  if (s.dist) return FactorDistribution::make(*s.dist, t.space());
  if (is_known_task(t.task()) && task_info(t.task()).observation)
    return FactorDistribution::make(*task_info(t.task()).observation, t.space());
  throw NotApplicable("no observation distribution for task " + std::to_string(t.task()));
}

inline Estimate obs_estimate(const ResultTable& t, std::size_t object, std::size_t index, std::size_t budget,
                             const FactorDistribution& dist, std::uint64_t seed) {
  if (budget < 1) throw UsageError("budget must be at least 1");
  const auto draws = sample_weighted(t.space(), dist, budget, seed);
  std::vector<std::size_t> ordinals;
  ordinals.reserve(draws.size());
  for (const auto& c : draws) ordinals.push_back(t.space().ordinal_of(c));
  std::sort(ordinals.begin(), ordinals.end());
  TableReader reader(t, t.repetitions());
  return detail::estimate_over(reader, ordinals, object, index);
}

/// Disjoint uniform samples of `budget` configurations per object; object k
/// gets block k of one random permutation prefix.
inline std::vector<std::size_t> rct_sample(const ResultTable& t, std::size_t object, std::size_t budget,
                                           std::uint64_t seed) {
  const std::size_t k = t.objects().size();
  if (budget < 1 || budget * k > t.configs())
    throw UsageError("per-object budget times object count must not exceed the space size");
  Rng rng(seed);
  const auto perm = sample_ordinals_without_replacement(t.configs(), budget * k, rng);
  std::vector<std::size_t> mine(perm.begin() + static_cast<std::ptrdiff_t>(object * budget),
                                perm.begin() + static_cast<std::ptrdiff_t>((object + 1) * budget));
  std::sort(mine.begin(), mine.end());
  return mine;
}

inline Estimate rct_estimate(const ResultTable& t, std::size_t object, std::size_t index, std::size_t budget,
                             std::uint64_t seed) {
  TableReader reader(t, t.repetitions());
  return detail::estimate_over(reader, rct_sample(t, object, budget, seed), object, index);
}

struct RctDifference {
  std::size_t a = 0;
  std::size_t b = 0;
  double difference = 0.0;
  Interval interval;

  bool indistinguishable() const noexcept { return interval.contains(0.0); }
};

/// Pairwise mean differences with std sqrt(sA^2/nA + sB^2/nB) and the
/// critical value chosen on min(nA, nB).
inline RctDifference rct_difference(const Estimate& a, const Estimate& b, double level, CiRule rule) {
  RctDifference d;
  d.difference = a.mean - b.mean;
  const double se = std::sqrt(a.std * a.std / static_cast<double>(a.n) + b.std * b.std / static_cast<double>(b.n));
  const double half = se == 0.0 ? 0.0 : critical_value(std::min(a.n, b.n), level, rule) * se;
  d.interval = {d.difference - half, d.difference + half, level};
  return d;
}

inline std::vector<RctDifference> rct_differences(const ResultTable& t, std::size_t index, std::size_t budget,
                                                  std::uint64_t seed, double level = 0.95,
                                                  CiRule rule = CiRule::paper) {
  std::vector<Estimate> est;
  for (std::size_t o = 0; o < t.objects().size(); ++o) est.push_back(rct_estimate(t, o, index, budget, seed));
  std::vector<RctDifference> out;
  for (std::size_t a = 0; a < est.size(); ++a)
    for (std::size_t b = a + 1; b < est.size(); ++b) {
      auto d = rct_difference(est[a], est[b], level, rule);
      d.a = a;
      d.b = b;
      out.push_back(d);
    }
  return out;
}

/// Mean and population std over the whole space in ordinal order.
inline Estimate do_calculus_estimate(const ResultTable& t, std::size_t object, std::size_t index) {
  t.require_complete();
  std::vector<std::size_t> all(t.configs());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  TableReader reader(t, t.repetitions());
  return detail::estimate_over(reader, all, object, index);
}

/// Configurations that share the fixed factor values; for task 2 the
/// unmasked noise factors are held at their distribution mode.
inline std::vector<std::size_t> scm_slice(const ResultTable& t, std::size_t mask_factor, std::size_t mask_value,
                                          const FactorDistribution& dist) {
  const EcSpace& space = t.space();
  std::vector<std::pair<std::size_t, std::size_t>> fixed{{mask_factor, mask_value}};
  if (t.task() == 2)
    for (const char* name : {"sigma_W", "sigma_T", "sigma_R"}) {
      const std::size_t f = space.find_factor(name);
      if (f != mask_factor) fixed.emplace_back(f, dist.mode(f));
    }
  std::vector<std::size_t> out;
  for (std::size_t o = 0; o < space.size(); ++o) {
    const Config c = space.config_at(o);
    bool keep = true;
    for (const auto& [f, v] : fixed) keep = keep && c[f] == v;
    if (keep) out.push_back(o);
  }
  return out;
}

/// With a uniform distribution nothing is masked and the estimate is the
/// full-space mean. Otherwise the masked factor is set to a value drawn from
/// its distribution and the remaining factors are averaged with their joint
/// weights.
inline Estimate scm_masked_estimate(const ResultTable& t, std::size_t object, std::size_t index,
                                    const std::string& mask, const FactorDistribution& dist, std::uint64_t seed) {
  const auto masks = scm_masks(t.task());
  if (std::find(masks.begin(), masks.end(), mask) == masks.end())
    throw UsageError("mask '" + mask + "' is not supported for task " + std::to_string(t.task()));
  if (dist.family() == DistributionFamily::uniform) return do_calculus_estimate(t, object, index);
  const std::size_t f = t.space().find_factor(mask);
  Rng rng(seed);
  const std::size_t v0 = detail::draw_index(dist.weights()[f], rng);
  const auto slice = scm_slice(t, f, v0, dist);
  TableReader reader(t, t.repetitions());
  std::vector<double> w, x;
  for (auto o : slice) {
    w.push_back(dist.joint_weight(t.space().config_at(o)));
    x.push_back(reader.value(o, object, index));
  }
  const double wsum = compensated_sum(w);
  if (!(wsum > 0.0)) throw DataError("masked slice has zero weight");
  std::vector<double> wx(x.size()), wd(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) wx[i] = w[i] * x[i];
  const double mean = compensated_sum(wx) / wsum;
  for (std::size_t i = 0; i < x.size(); ++i) wd[i] = w[i] * (x[i] - mean) * (x[i] - mean);
  return {mean, std::sqrt(compensated_sum(wd) / wsum), slice.size(), reader.cost()};
}

/// Fixed, contiguous partitions: task 4 splits the XYZ and XY2Z buckets in
/// half (ordinal order); task 6 crosses n in {2, 5} / {10, 100} with epsilon
/// in [0, 0.2) / [0.2, 0.4) / [0.4, 1].
inline std::vector<std::size_t> nrct_partition(const ResultTable& t, std::size_t object) {
  const EcSpace& space = t.space();
  std::vector<std::size_t> out;
  if (t.task() == 4) {
    if (object >= 4) throw UsageError("task 4 has four partitions");
    const std::size_t bucket = object < 2 ? 1 : 3;  // XYZ, XY2Z
    std::vector<std::size_t> all;
    for (std::size_t o = 0; o < space.size(); ++o)
      if (space.config_at(o)[0] == bucket) all.push_back(o);
    const std::size_t half = (all.size() + 1) / 2;
    if (object % 2 == 0)
      out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(half));
    else
      out.assign(all.begin() + static_cast<std::ptrdiff_t>(half), all.end());
    return out;
  }
  if (t.task() == 6) {
    struct Cell {
      bool long_games;
      int eps_band;
    };
    static constexpr std::array<Cell, 6> kCells{{{false, 1}, {true, 1}, {true, 0}, {true, 2}, {false, 2}, {false, 0}}};
    if (object >= kCells.size()) throw UsageError("task 6 has six partitions");
    const auto cell = kCells[object];
    for (std::size_t o = 0; o < space.size(); ++o) {
      const Config c = space.config_at(o);
      const bool long_games = games::kRounds.at(c[0]) >= 10;
      const double eps = games::kEpsilons.at(c[3]);
      const int band = eps < 0.2 ? 0 : (eps < 0.4 ? 1 : 2);
      if (long_games == cell.long_games && band == cell.eps_band) out.push_back(o);
    }
    return out;
  }
  throw NotApplicable("no partition defined for task " + std::to_string(t.task()));
}

inline Estimate nrct_estimate(const ResultTable& t, std::size_t object, std::size_t index, std::size_t budget,
                              std::uint64_t seed) {
  const auto part = nrct_partition(t, object);
  std::vector<std::size_t> pick;
  if (budget >= part.size()) {
    pick = part;
  } else {
    for (auto i : detail::sorted_sample(part.size(), budget, seed)) pick.push_back(part[i]);
  }
  TableReader reader(t, t.repetitions());
  return detail::estimate_over(reader, pick, object, index);
}

inline Estimate stagger_estimate(const ResultTable& staggered, std::size_t object, std::size_t index,
                                 std::size_t budget, std::uint64_t seed) {
  if (staggered.task() != 2) throw NotApplicable("staggering is defined for task 2 only");
  return eva_estimate(staggered, object, index, budget, seed);
}

// ---------------------------------------------------------------------------
// Design of experiments

struct DoeDesign {
  std::vector<std::vector<std::size_t>> blocks;           // per factor, block start offsets
  std::vector<std::vector<std::size_t>> representatives;  // per factor, one value per block
  std::vector<Config> runs;                               // mixed-radix order over block choices
};

/// Splits `m` values into `parts` contiguous blocks; earlier blocks take the remainder.
inline std::vector<std::size_t> block_starts(std::size_t m, std::size_t parts) {
  if (parts < 1 || m < parts) throw NotApplicable("factor too small for the design");
  std::vector<std::size_t> starts;
  const std::size_t base = m / parts, extra = m % parts;
  std::size_t at = 0;
  for (std::size_t b = 0; b < parts; ++b) {
    starts.push_back(at);
    at += base + (b < extra ? 1 : 0);
  }
  return starts;
}

/// kind: doe_2k / doe_2kr / doe_2kmp (two blocks) or doe_lk (l blocks). For
/// doe_2kmp the last p factors keep only the runs whose high/low sign equals
/// the product of the signs of the first k - p factors.
inline DoeDesign doe_design(const EcSpace& space, MethodKind kind, std::size_t l, std::size_t p, std::uint64_t seed) {
  if (!is_doe(kind)) throw UsageError("not a DoE method");
  if (space.constrained()) throw NotApplicable("DoE needs an unconstrained space");
  const std::size_t parts = kind == MethodKind::doe_lk ? l : 2;
  const std::size_t k = space.dimension();
  if (kind == MethodKind::doe_2kmp && (p < 1 || p >= k)) throw NotApplicable("p must be in [1, k)");
  DoeDesign d;
  Rng rng(seed);
  for (const auto& f : space.factors()) {
    auto starts = block_starts(f.size(), parts);
    std::vector<std::size_t> reps;
    for (std::size_t b = 0; b < parts; ++b) {
      const std::size_t end = b + 1 < parts ? starts[b + 1] : f.size();
      reps.push_back(starts[b] + static_cast<std::size_t>(rng.below(end - starts[b])));
    }
    d.blocks.push_back(std::move(starts));
    d.representatives.push_back(std::move(reps));
  }
  std::vector<std::size_t> level(k, 0);
  for (;;) {
    bool keep = true;
    if (kind == MethodKind::doe_2kmp) {
      int product = 1;
      for (std::size_t i = 0; i < k - p; ++i) product *= level[i] ? 1 : -1;
      for (std::size_t i = k - p; i < k; ++i) keep = keep && (level[i] ? 1 : -1) == product;
    }
    if (keep) {
      Config c;
      c.indices.resize(k);
      for (std::size_t i = 0; i < k; ++i) c.indices[i] = d.representatives[i][level[i]];
      d.runs.push_back(std::move(c));
    }
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++level[i] < parts) break;
      level[i] = 0;
      if (i == 0) return d;
    }
  }
}

inline std::size_t doe_run_count(const EcSpace& space, MethodKind kind, std::size_t l, std::size_t p) {
  const std::size_t parts = kind == MethodKind::doe_lk ? l : 2;
  std::size_t exp = space.dimension();
  if (kind == MethodKind::doe_2kmp) exp -= p;
  std::size_t n = 1;
  for (std::size_t i = 0; i < exp; ++i) n *= parts;
  return n;
}

inline std::size_t doe_repetitions(const MethodSpec& s, const ResultTable& t) {
  const std::size_t r = s.r.value_or(s.kind == MethodKind::doe_2kr ? t.repetitions() : 1);
  if (r < 1 || r > t.repetitions()) throw UsageError("r exceeds the table's stored repetitions");
  return r;
}

/// Plain mean / std over the runs of `designs` independently drawn designs,
/// each run averaged over its first r repetitions.
inline Estimate doe_estimate(const ResultTable& t, std::size_t object, std::size_t index, const MethodSpec& s,
                             std::size_t designs, std::uint64_t seed) {
  if (designs < 1) throw UsageError("at least one design is needed");
  const std::size_t r = doe_repetitions(s, t);
  std::vector<std::size_t> ordinals;
  for (std::size_t j = 0; j < designs; ++j) {
    const auto d = doe_design(t.space(), s.kind, s.l, s.p, derive_seed(seed, "doe.design", {j}));
    for (const auto& c : d.runs) ordinals.push_back(t.space().ordinal_of(c));
  }
  std::sort(ordinals.begin(), ordinals.end());
  TableReader reader(t, r);
  return detail::estimate_over(reader, ordinals, object, index);
}

// ---------------------------------------------------------------------------
// Dispatch

/// `amount` is the per-object budget for sampling methods, the number of
/// pooled designs for DoE methods, and unused for ci_do / ci_scm.
inline Estimate run_method(const MethodSpec& s, const MethodInputs& in, std::size_t object, std::size_t index,
                           std::size_t amount, std::uint64_t seed) {
  check_applicable(s, in);
  const ResultTable& t = in.table;
  switch (s.kind) {
    case MethodKind::eva: return eva_estimate(t, object, index, amount, seed);
    case MethodKind::obs: return obs_estimate(t, object, index, amount, observation_distribution(s, t), seed);
    case MethodKind::rct: return rct_estimate(t, object, index, amount, seed);
    case MethodKind::ci_do: return do_calculus_estimate(t, object, index);
    case MethodKind::ci_scm:
      return scm_masked_estimate(t, object, index, s.mask.value_or(scm_masks(t.task()).front()),
                                 observation_distribution(s, t), seed);
    case MethodKind::qe_nrct: return nrct_estimate(t, object, index, amount, seed);
    case MethodKind::qe_stagger: return stagger_estimate(*in.staggered, object, index, amount, seed);
    case MethodKind::doe_2k:
    case MethodKind::doe_2kr:
    case MethodKind::doe_2kmp:
    case MethodKind::doe_lk: return doe_estimate(t, object, index, s, amount, seed);
  }
  throw UsageError("unhandled method");
}

struct CostPoint {
  std::size_t amount = 0;
  std::size_t cost = 0;
};

/// The points a curve is evaluated at. Sampling methods use the budgets that
/// are legal for them (costs = budget * r); DoE methods pool 1, 2, ... designs
/// while the cost stays within the largest budget times r; ci_do and ci_scm
/// have a single fixed cost.
inline std::vector<CostPoint> cost_points(const MethodSpec& s, const MethodInputs& in, std::size_t object,
                                          std::vector<std::size_t> budgets) {
  check_applicable(s, in);
  const ResultTable& t = in.table;
  const std::size_t r = t.repetitions();
  if (s.budget) budgets = {*s.budget};
  std::sort(budgets.begin(), budgets.end());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());
  budgets.erase(std::remove(budgets.begin(), budgets.end(), std::size_t{0}), budgets.end());
  if (budgets.empty()) throw UsageError("no budgets given");
  std::vector<CostPoint> pts;

  auto capped = [&](std::size_t max_budget) {
    for (auto b : budgets) {
      const std::size_t a = std::min(b, max_budget);
      if (pts.empty() || pts.back().amount != a) pts.push_back({a, a * r});
    }
  };

  switch (s.kind) {
    case MethodKind::eva:
    case MethodKind::qe_stagger: capped(t.configs()); break;
    case MethodKind::rct: capped(t.configs() / t.objects().size()); break;
    case MethodKind::qe_nrct: capped(nrct_partition(t, object).size()); break;
    case MethodKind::obs:
      for (auto b : budgets) pts.push_back({b, b * r});
      break;
    case MethodKind::ci_do: pts.push_back({0, t.configs() * r}); break;
    case MethodKind::ci_scm: {
      const auto dist = observation_distribution(s, t);
      if (dist.family() == DistributionFamily::uniform) {
        pts.push_back({0, t.configs() * r});
      } else {
        const std::size_t f = t.space().find_factor(s.mask.value_or(scm_masks(t.task()).front()));
        pts.push_back({0, scm_slice(t, f, 0, dist).size() * r});
      }
      break;
    }
    case MethodKind::doe_2k:
    case MethodKind::doe_2kr:
    case MethodKind::doe_2kmp:
    case MethodKind::doe_lk: {
      const std::size_t unit = doe_run_count(t.space(), s.kind, s.l, s.p) * doe_repetitions(s, t);
      const std::size_t limit = budgets.back() * r;
      for (std::size_t m = 1; m == 1 || m * unit <= limit; ++m) pts.push_back({m, m * unit});
      break;
    }
  }
  return pts;
}

}  // namespace axia
