// One test per invariant of every module. The acceptance binary runs this
// suite as a whole.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>

#include "axia/manifest.hpp"
#include "axia/meta.hpp"
#include "axia/methods.hpp"
#include "axia/synth.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace axia;
using axia::testing::scratch_dir;
using axia::testing::slurp;

namespace {

const ResultTable& cached(int task) {
  static std::map<int, ResultTable> tables;
  auto it = tables.find(task);
  if (it == tables.end()) it = tables.emplace(task, load_task_table(task, 0, axia::testing::table_cache())).first;
  return it->second;
}

double half_width(std::size_t n, CiRule rule) { return confidence_interval({0.0, 1.0, n, n}, 0.95, rule).half_width(); }

}  // namespace

// ---------------------------------------------------------------- ec-core

TEST(EcCoreProperty, OrdinalRoundTripOnEveryTaskSpace) {
  for (int task = 1; task <= 8; ++task) {
    const auto s = task_space(task);
    ASSERT_LE(s.size(), 10000u);
    for (std::size_t o = 0; o < s.size(); ++o) ASSERT_EQ(s.ordinal_of(s.config_at(o)), o) << "task " << task;
  }
}

TEST(EcCoreProperty, UniformSampleHasNoDuplicates) {
  const auto s = task_space(6);
  Rng pick(1);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 1 + pick.below(s.size());
    const auto sample = sample_uniform_without_replacement(s, n, seed);
    std::set<std::size_t> ords;
    for (const auto& c : sample) ords.insert(s.ordinal_of(c));
    ASSERT_EQ(ords.size(), n);
  }
}

TEST(EcCoreProperty, JointWeightIsProductAndSumsToOne) {
  for (int task : {1, 2, 3, 5, 6, 7, 8}) {
    const auto s = task_space(task);
    for (auto fam : {DistributionFamily::uniform, DistributionFamily::power, DistributionFamily::gaussian,
                     DistributionFamily::mixed_log}) {
      const auto d = FactorDistribution::make(fam, s);
      std::vector<double> all;
      for (std::size_t o = 0; o < s.size(); ++o) {
        const auto c = s.config_at(o);
        double prod = 1.0;
        for (std::size_t f = 0; f < s.dimension(); ++f) prod *= d.weights()[f][c[f]];
        ASSERT_EQ(d.joint_weight(c), prod);
        all.push_back(prod);
      }
      EXPECT_NEAR(compensated_sum(all), 1.0, 1e-9) << "task " << task;
    }
  }
}

TEST(EcCoreProperty, SamplingIsReproducible) {
  const auto s = task_space(3);
  const auto d = FactorDistribution::make(DistributionFamily::mixed_log, s);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    EXPECT_EQ(sample_uniform_without_replacement(s, 40, seed), sample_uniform_without_replacement(s, 40, seed));
    EXPECT_EQ(sample_weighted(s, d, 40, seed), sample_weighted(s, d, 40, seed));
  }
}

// ---------------------------------------------------------------- stats

TEST(StatsProperty, HalfWidthDecreasesWithinEachBranch) {
  for (std::size_t n = 1; n < 400; ++n) {
    // conventional: t needs n >= 2, so n = 1 falls back to z
    if (n >= 2) EXPECT_GT(half_width(n, CiRule::conventional), half_width(n + 1, CiRule::conventional)) << n;
    if (n != kZScoreLimit) EXPECT_GT(half_width(n, CiRule::paper), half_width(n + 1, CiRule::paper)) << n;
  }
}

TEST(StatsProperty, PaperRuleWidensOnceWhenSwitchingToT) {
  // z for n <= 30, t(n - 1) above: the only non-decreasing step
  EXPECT_NEAR(half_width(30, CiRule::paper), 1.959963984540054 / std::sqrt(30.0), 1e-12);
  EXPECT_NEAR(half_width(31, CiRule::paper), 2.0422724563012373 / std::sqrt(31.0), 1e-9);
  EXPECT_LT(half_width(30, CiRule::paper), half_width(31, CiRule::paper));
}

TEST(StatsProperty, NormalCoverageAtN50) {
  Rng rng(2024);
  constexpr double mu = 3.0;
  std::vector<Interval> iv;
  for (int k = 0; k < 500; ++k) {
    std::vector<double> x(50);
    for (auto& v : x) v = mu + rng.normal();
    const auto ms = mean_std(x);
    iv.push_back(confidence_interval({ms.mean, ms.std, 50, 50}));
  }
  const double cov = coverage_accuracy(iv, mu);
  EXPECT_GE(cov, 0.90);
  EXPECT_LE(cov, 0.99);
}

TEST(StatsProperty, MeanStdTranslation) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(2 + rng.below(100)), y;
    for (auto& v : x) v = 10.0 * rng.normal();
    const double shift = 1000.0 * rng.normal();
    for (double v : x) y.push_back(v + shift);
    const auto a = mean_std(x), b = mean_std(y);
    EXPECT_NEAR(b.mean, a.mean + shift, 1e-9 * (1.0 + std::abs(shift)));
    EXPECT_NEAR(b.std, a.std, 1e-9 * (1.0 + std::abs(shift)));
  }
}

// ---------------------------------------------------------------- task-chaos

TEST(ChaosProperty, SimulationIsDeterministic) {
  const auto s = chaos::make_space();
  for (std::size_t o = 0; o < s.size(); o += 97) {
    const auto cfg = chaos::config_from(s.config_at(o));
    for (auto sys : {chaos::System::lorenz, chaos::System::roessler}) {
      const auto a = chaos::simulate_attractor(sys, cfg), b = chaos::simulate_attractor(sys, cfg);
      ASSERT_EQ(a.points, b.points);
      EXPECT_EQ(chaos::chaos_result(cfg, sys).lyapunov, chaos::chaos_result(cfg, sys).lyapunov);
    }
  }
}

TEST(ChaosProperty, KsInUnitRange) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<chaos::Vec3> pts(4 + rng.below(60));
    const int grid = 1 + static_cast<int>(rng.below(4));  // coarse grids force ties
    for (auto& p : pts)
      p = {double(rng.below(grid)), double(rng.below(grid)), rng.bernoulli(0.5) ? rng.normal() : 0.0};
    const double d = chaos::ks_statistic_3d(pts);
    ASSERT_GE(d, 0.0);
    ASSERT_LE(d, 1.0);
  }
  const auto& t = cached(1);
  for (std::size_t c = 0; c < t.configs(); ++c)
    for (std::size_t o = 0; o < 2; ++o) {
      const double d = t.get(c, o, t.index_id("ks"), 0);
      ASSERT_GE(d, 0.0);
      ASSERT_LE(d, 1.0);
    }
}

TEST(ChaosProperty, ConstantTrajectoryHasZeroExponent) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const chaos::Vec3 p{rng.normal(), rng.normal(), rng.normal()};
    const std::vector<chaos::Vec3> traj(4 + rng.below(500), p);
    EXPECT_EQ(chaos::lyapunov_exponent(traj), 0.0);
  }
}

// ---------------------------------------------------------------- task-rainfall

TEST(RainfallProperty, MaeNeverExceedsRmse) {
  const auto s = rainfall::make_space();
  for (std::size_t o = 0; o < s.size(); o += 211) {
    const auto series = rainfall::rainfall_series(rainfall::config_from(s.config_at(o)), o);
    for (auto m : rainfall::kModels) {
      const auto sc = rainfall::regressor_scores(m, series, o);
      EXPECT_LE(sc.mae, sc.rmse * (1.0 + 1e-12));
      EXPECT_EQ(sc.rmse, std::sqrt(sc.mse));
    }
  }
}

TEST(RainfallProperty, MoreNoiseNeverHelpsTheLinearModel) {
  for (double qs : rainfall::kQs)
    for (double w : rainfall::kW)
      for (double temp : {rainfall::kT.front(), rainfall::kT.back()}) {
        const rainfall::RainConfig lo{qs, w, temp, rainfall::kSigmaW.front(), rainfall::kSigmaT.front(),
                                      rainfall::kSigmaR.front()};
        const rainfall::RainConfig hi{qs, w, temp, rainfall::kSigmaW.back(), rainfall::kSigmaT.back(),
                                      rainfall::kSigmaR.back()};
        double mlo = 0.0, mhi = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
          mlo += rainfall::regressor_scores(rainfall::Model::linear, rainfall::rainfall_series(lo, seed), seed).mse;
          mhi += rainfall::regressor_scores(rainfall::Model::linear, rainfall::rainfall_series(hi, seed), seed).mse;
        }
        EXPECT_LE(mlo, mhi);
      }
}

TEST(RainfallProperty, ScoresAreDeterministic) {
  const rainfall::RainConfig cfg{0.02, 0.1, 285, 0.03, 1.5, 0.3};
  for (auto m : rainfall::kModels) {
    const auto a = rainfall::regressor_scores(m, rainfall::rainfall_series(cfg, 4), 4);
    const auto b = rainfall::regressor_scores(m, rainfall::rainfall_series(cfg, 4), 4);
    EXPECT_EQ(a.mse, b.mse);
    EXPECT_EQ(a.mae, b.mae);
  }
}

// ---------------------------------------------------------------- task-population

TEST(PopulationProperty, EmptyStaysEmpty) {
  for (auto sp : population::kSpecies)
    for (std::size_t steps : population::kSteps) {
      population::ColonyConfig cfg{20, population::Pattern::centered, steps, 6, 2.0};
      const auto hist = population::simulate_colony(population::Grid(20), cfg, sp, steps);
      for (auto p : hist) ASSERT_EQ(p, 0u);
      const auto s = population::stability_indexes(hist);
      EXPECT_EQ(s.avg_pop, 0.0);
      EXPECT_EQ(s.std_pop, 0.0);
      EXPECT_EQ(s.half_life, double(steps + 1));
      EXPECT_EQ(s.growth_rate, 0.0);
    }
}

TEST(PopulationProperty, LargerCapacityNeverShrinksBacteria) {
  for (std::size_t side : {10, 20, 50})
    for (auto pat : population::kPatterns)
      for (std::size_t steps : {5, 25})
        for (double res : population::kResources) {
          double lo = 0.0, hi = 0.0;
          for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const population::ColonyConfig a{side, pat, steps, 4, res}, b{side, pat, steps, 7, res};
            lo += population::stability_indexes(population::simulate_colony(a, population::Species::bacteria, seed)).avg_pop;
            hi += population::stability_indexes(population::simulate_colony(b, population::Species::bacteria, seed)).avg_pop;
          }
          EXPECT_GE(hi, lo) << side << " " << int(pat) << " " << steps << " " << res;
        }
}

TEST(PopulationProperty, Deterministic) {
  const population::ColonyConfig cfg{50, population::Pattern::spread, 25, 5, 1.5};
  for (auto sp : population::kSpecies)
    EXPECT_EQ(population::simulate_colony(cfg, sp, 8), population::simulate_colony(cfg, sp, 8));
}

// ---------------------------------------------------------------- task-energy

TEST(EnergyProperty, EnumerationDeterministicAndCanonical) {
  const auto a = energy::enumerate_materials(), b = energy::enumerate_materials();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].formula(), b[i].formula());
    EXPECT_TRUE(energy::canonical(a[i].pattern, a[i].y, a[i].z));
  }
  // canonicalizing via the space is idempotent: each config maps back onto itself
  const auto s = energy::make_space();
  for (std::size_t o = 0; o < s.size(); ++o) EXPECT_EQ(energy::material_from(s.config_at(o)).formula(), a[o].formula());
}

TEST(EnergyProperty, NoiseFreeEnergyIsLinearInBondCounts) {
  const auto ms = energy::enumerate_materials();
  Eigen::MatrixXd x(Eigen::Index(ms.size()), Eigen::Index(energy::detail::bond_features(ms[0]).size()));
  Eigen::VectorXd y(Eigen::Index(ms.size()));
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto f = energy::detail::bond_features(ms[i]);
    for (std::size_t j = 0; j < f.size(); ++j) x(Eigen::Index(i), Eigen::Index(j)) = f[j];
    y(Eigen::Index(i)) = energy::formation_energy_exact(ms[i]);
  }
  const Eigen::VectorXd beta = x.completeOrthogonalDecomposition().solve(y);
  EXPECT_LT((x * beta - y).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(EnergyProperty, ErrorMetricRanges) {
  Rng rng(13);
  for (int trial = 0; trial < 10000; ++trial) {
    const double p = 1000.0 * rng.normal() * (rng.bernoulli(0.1) ? 0.0 : 1.0);
    const double t = 1000.0 * rng.normal() * (rng.bernoulli(0.1) ? 0.0 : 1.0);
    const double s = energy::sym_percentage_error(p, t);
    ASSERT_GE(s, 0.0);
    ASSERT_LE(s, 2.0);
    ASSERT_GE(energy::abs_percentage_error(p, t), 0.0);
  }
  const auto& tab = cached(4);
  for (std::size_t o = 0; o < 4; ++o) {
    EXPECT_GE(tab.get(0, o, tab.index_id("mape"), 0), 0.0);
    EXPECT_LE(tab.get(0, o, tab.index_id("smape"), 0), 2.0);
  }
}

// ---------------------------------------------------------------- task-random

TEST(RandomnessProperty, PValuesInUnitRange) {
  const auto s = randomness::make_space();
  for (std::size_t o = 0; o < s.size(); ++o) {
    const auto seq = randomness::logistic_sequence(randomness::config_from(s.config_at(o)));
    for (auto t : randomness::kTests) {
      const auto v = randomness::run_test(t, seq);
      ASSERT_GE(v.p_value, 0.0);
      ASSERT_LE(v.p_value, 1.0);
    }
  }
  Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> seq(rng.below(120));
    for (auto& v : seq) v = rng.bernoulli(0.3) ? 1e6 * rng.normal() : std::floor(3 * rng.uniform01());
    for (auto t : randomness::kTests) {
      const auto v = randomness::run_test(t, seq);
      ASSERT_GE(v.p_value, 0.0);
      ASSERT_LE(v.p_value, 1.0);
    }
  }
}

TEST(RandomnessProperty, TrueRateAntitoneInThreshold) {
  const auto s = randomness::make_space();
  std::vector<std::vector<double>> seqs;
  for (std::size_t o = 0; o < s.size(); ++o) seqs.push_back(randomness::logistic_sequence(randomness::config_from(s.config_at(o))));
  for (auto t : randomness::kTests) {
    double prev = -1.0;
    for (double thr : {0.0001, 0.001, 0.01, 0.05, 0.1, 0.3, 0.5, 0.9}) {
      std::vector<randomness::Verdict> v;
      for (const auto& q : seqs) v.push_back(randomness::run_test(t, q, thr));
      const double rate = randomness::randomness_indexes(v).true_rate;
      EXPECT_GE(rate, prev);
      prev = rate;
    }
  }
}

TEST(RandomnessProperty, FullyDeterministic) {
  EXPECT_EQ(slurp(table_path(axia::testing::table_cache(), 5, 0)).size() > 0, true);
  const auto a = synth_result_table(5, 0, 1), b = synth_result_table(5, 123, 2);
  for (std::size_t c = 0; c < a.configs(); ++c)
    for (std::size_t o = 0; o < 4; ++o)
      for (std::size_t i = 0; i < 2; ++i) ASSERT_EQ(a.get(c, o, i, 0), b.get(c, o, i, 0));
}

// ---------------------------------------------------------------- task-games

TEST(GamesProperty, EarningsAreBounded) {
  const auto s = games::make_space();
  for (std::size_t o = 0; o < s.size(); o += 7) {
    const auto cfg = games::config_from(s.config_at(o));
    const double bound =
        cfg.payoffs.d * (1.0 - std::pow(cfg.delta, double(cfg.rounds))) / (1.0 - cfg.delta) * (1.0 + 1e-12);
    for (auto a : games::kStrategies)
      for (auto b : games::kStrategies) {
        const auto [ua, ub] = games::play_match(a, b, cfg, o);
        ASSERT_GT(ua, 0.0);
        ASSERT_GT(ub, 0.0);
        ASSERT_LE(ua, bound);
        ASSERT_LE(ub, bound);
      }
  }
}

TEST(GamesProperty, NoiselessMatchesIgnoreTheSeed) {
  const auto s = games::make_space();
  for (std::size_t o = 0; o < s.size(); ++o) {
    const auto cfg = games::config_from(s.config_at(o));
    if (cfg.epsilon != 0.0) continue;
    for (auto a : games::kStrategies)
      for (auto b : games::kStrategies) ASSERT_EQ(games::play_match(a, b, cfg, 1), games::play_match(a, b, cfg, 987654321));
  }
}

TEST(GamesProperty, EveryPayoffTupleIsAPrisonersDilemma) {
  using games::Action;
  for (const auto& p : games::kPayoffs) {
    const double temptation = games::payoff(p, Action::defect, Action::cooperate);
    const double reward = games::payoff(p, Action::cooperate, Action::cooperate);
    const double punishment = games::payoff(p, Action::defect, Action::defect);
    const double sucker = games::payoff(p, Action::cooperate, Action::defect);
    EXPECT_GT(temptation, reward);
    EXPECT_GT(reward, punishment);
    EXPECT_GT(punishment, sucker);
  }
}

// ---------------------------------------------------------------- ingest-external

TEST(IngestProperty, LoadSaveIsIdentity) {
  const auto dir = scratch_dir("prop-rt");
  for (int task : {3, 6}) {
    const auto& t = cached(task);
    save_result_table(t, dir / "t.csv");
    const auto back = load_result_table(dir / "t.csv");
    for (std::size_t c = 0; c < t.configs(); ++c)
      for (std::size_t o = 0; o < t.objects().size(); ++o)
        for (std::size_t i = 0; i < t.indexes().size(); ++i)
          for (std::size_t r = 0; r < t.repetitions(); ++r) ASSERT_EQ(back.get(c, o, i, r), t.get(c, o, i, r));
  }
}

TEST(IngestProperty, IngestedAndSimulatedTablesAreIndistinguishable) {
  const auto dir = scratch_dir("prop-ingest");
  const auto& sim = cached(6);
  save_result_table(sim, dir / "games.csv");
  const auto ing = load_result_table(dir / "games.csv");
  for (auto k : kMethodKinds) {
    const MethodSpec s{k};
    if (!applicable(s, {sim})) {
      EXPECT_FALSE(applicable(s, {ing}));
      continue;
    }
    for (std::size_t o : {0, 4}) {
      const auto a = run_method(s, {sim}, o, 1, 20, 3), b = run_method(s, {ing}, o, 1, 20, 3);
      EXPECT_EQ(a.mean, b.mean) << to_string(k);
      EXPECT_EQ(a.std, b.std) << to_string(k);
      EXPECT_EQ(a.cost, b.cost) << to_string(k);
    }
  }
}

// ---------------------------------------------------------------- methods

TEST(MethodsProperty, CostEqualsReads) {
  const auto& t = cached(3);
  const MethodInputs in{t};
  for (auto k : kMethodKinds) {
    const MethodSpec s{k};
    if (!applicable(s, in)) continue;
    const auto e = run_method(s, in, 0, 0, 20, 1);
    std::size_t reads_per_config = t.repetitions();
    if (is_doe(k)) reads_per_config = doe_repetitions(s, t);
    std::size_t configs = e.n;
    if (k == MethodKind::ci_scm) {
      const auto dist = observation_distribution(s, t);
      configs = dist.family() == DistributionFamily::uniform ? t.configs() : e.n;
    }
    EXPECT_EQ(e.cost, configs * reads_per_config) << to_string(k);
  }
}

TEST(MethodsProperty, EvaAndRctAreUnbiased) {
  const auto& t = cached(5);
  constexpr std::size_t budget = 30, seeds = 200;
  for (std::size_t o = 0; o < 4; ++o) {
    const auto gt = ground_truth(t, o, 1);
    double se = 0.0, sr = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
      se += eva_estimate(t, o, 1, budget, s).mean;
      sr += rct_estimate(t, o, 1, budget, s).mean;
    }
    const double tol = 3.0 * gt.std / std::sqrt(double(budget * seeds));
    EXPECT_LE(std::abs(se / seeds - gt.mean), tol);
    EXPECT_LE(std::abs(sr / seeds - gt.mean), tol);
  }
}

TEST(MethodsProperty, FractionalDesignInsideFullDesign) {
  for (int task : {3, 5}) {
    const auto s = task_space(task);
    for (std::uint64_t seed = 0; seed < 100; ++seed)
      for (std::size_t p = 1; p < s.dimension(); ++p) {
        const auto full = doe_design(s, MethodKind::doe_2k, 4, p, seed);
        const auto frac = doe_design(s, MethodKind::doe_2kmp, 4, p, seed);
        std::set<Config> runs(full.runs.begin(), full.runs.end());
        for (const auto& c : frac.runs) ASSERT_TRUE(runs.count(c));
      }
  }
}

TEST(MethodsProperty, DoCalculusIsTheGroundTruthOracle) {
  for (int task = 1; task <= 6; ++task) {
    const auto& t = cached(task);
    const auto oracle = axia::testing::gt_oracle_from_csv(table_path(axia::testing::table_cache(), task, 0));
    for (std::size_t o = 0; o < t.objects().size(); ++o)
      for (std::size_t i = 0; i < t.indexes().size(); ++i)
        EXPECT_EQ(do_calculus_estimate(t, o, i).mean, oracle.at({t.objects()[o], t.indexes()[i]})) << task;
  }
}

TEST(MethodsProperty, DeterministicGivenSeed) {
  const auto& t = cached(6);
  for (auto k : kMethodKinds) {
    const MethodSpec s{k};
    if (!applicable(s, {t})) continue;
    for (std::uint64_t seed : {0, 5, 99}) {
      const auto a = run_method(s, {t}, 3, 0, 25, seed), b = run_method(s, {t}, 3, 0, 25, seed);
      EXPECT_EQ(a.mean, b.mean);
      EXPECT_EQ(a.std, b.std);
    }
  }
}

// ---------------------------------------------------------------- meta-harness

TEST(MetaProperty, AccuracyInUnitRangeAndSeedDeterministic) {
  const auto& t = cached(3);
  for (const char* spec : {"eva", "obs", "doe_2kmp", "rct"}) {
    EvalOptions opt{20, 0.95, 17};
    const double gt = ground_truth(t, 2, 3).mean;
    const auto a = accuracy_at(parse_method_spec(spec), {t}, 2, 3, 10, gt, opt);
    const auto b = accuracy_at(parse_method_spec(spec), {t}, 2, 3, 10, gt, opt);
    EXPECT_GE(a.accuracy, 0.0);
    EXPECT_LE(a.accuracy, 1.0);
    EXPECT_EQ(a.accuracy, b.accuracy);
  }
}

TEST(MetaProperty, EvaFullBudgetIsOne) {
  for (int task = 1; task <= 6; ++task) {
    const auto& t = cached(task);
    const double gt = ground_truth(t, 0, 0).mean;
    EXPECT_EQ(accuracy_at(parse_method_spec("eva"), {t}, 0, 0, t.configs(), gt, {}).accuracy, 1.0) << task;
  }
}

TEST(MetaProperty, C09AMonotoneUnderImprovement) {
  Rng rng(15);
  auto cost_of = [](const Curve& c) { return c_at_09a(c).value_or(SIZE_MAX); };
  for (int trial = 0; trial < 5000; ++trial) {
    Curve c;
    std::size_t cost = 0;
    for (std::size_t i = 0, n = 1 + rng.below(8); i < n; ++i) c.points.push_back({cost += 1 + rng.below(99), rng.uniform01()});
    const auto before = cost_of(c);
    for (auto& p : c.points)
      if (rng.bernoulli(0.5)) p.accuracy = p.accuracy + (1.0 - p.accuracy) * rng.uniform01();
    ASSERT_LE(cost_of(c), before);
  }
}

TEST(MetaProperty, GroundTruthInvariantUnderReordering) {
  for (int task : {2, 4, 6}) {
    const auto& t = cached(task);
    std::vector<double> v(t.configs());
    for (std::size_t c = 0; c < v.size(); ++c) v[c] = t.config_value(c, 0, 0);
    const double gt = ground_truth(t, 0, 0).mean;
    Rng rng(16);
    for (int trial = 0; trial < 10; ++trial) {
      for (std::size_t i = v.size() - 1; i > 0; --i) std::swap(v[i], v[rng.below(i + 1)]);
      EXPECT_LE(std::abs(mean_std(v).mean - gt), 1e-12 * std::max(1.0, std::abs(gt)));
    }
  }
}

// ---------------------------------------------------------------- cli

TEST(CliProperty, OutputsAreRestoredByteIdentically) {
  const auto dir = scratch_dir("prop-manifest");
  RunManifest m;
  m.tasks = {1, 6};
  m.methods = {"eva", "qe_nrct", "ci_scm:mask=xyz", "doe_lk:l=3"};
  m.budgets = {10, 40};
  m.k = 8;
  m.cache_dir = axia::testing::table_cache().string();
  m.out = (dir / "out").string();
  run_manifest(m);
  std::map<std::filesystem::path, std::string> first;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir / "out"))
    if (e.is_regular_file()) first[e.path()] = slurp(e.path());
  ASSERT_GT(first.size(), 4u);
  std::filesystem::remove_all(dir / "out");
  run_manifest(m);
  for (const auto& [p, text] : first) EXPECT_EQ(slurp(p), text) << p;
}
