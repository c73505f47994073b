#pragma once

/// Materializes tasks 1-6 into result tables, with an on-disk cache.
///
/// Stochastic tasks (2, 3, 6) store three repetitions whose streams mix the
/// master seed with the repetition seeds 0, 37 and 42.

#include <array>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "axia/catalog.hpp"
#include "axia/errors.hpp"
#include "axia/parallel.hpp"
#include "axia/result_table.hpp"
#include "axia/rng.hpp"

namespace axia {

inline constexpr std::array<std::uint64_t, 3> kPaperSeeds{0, 37, 42};

namespace detail {

inline ResultTable synth_chaos(std::size_t jobs) {
  ResultTable t = ResultTable::for_task(1);
  const EcSpace& space = t.space();
  parallel_for(space.size(), jobs, [&](std::size_t c) {
    const auto cfg = chaos::config_from(space.config_at(c));
    for (std::size_t o = 0; o < 2; ++o) {
      const auto r = chaos::chaos_result(cfg, o == 0 ? chaos::System::lorenz : chaos::System::roessler);
      t.set(c, o, 0, 0, r.lyapunov);
      t.set(c, o, 1, 0, r.ks);
    }
  });
  return t;
}

/// Fills the task-2 table and, when given, the staggered table in which
/// object i is fitted on the first 2190 * (i + 1) hours.
inline ResultTable synth_rainfall(std::uint64_t seed, std::size_t jobs, ResultTable* staggered) {
  ResultTable t = ResultTable::for_task(2);
  if (staggered) *staggered = ResultTable::for_task(2);
  const EcSpace& space = t.space();
  parallel_for(space.size(), jobs, [&](std::size_t c) {
    const auto cfg = rainfall::config_from(space.config_at(c));
    for (std::size_t rep = 0; rep < kPaperSeeds.size(); ++rep) {
      const std::uint64_t s = derive_seed(seed, "rainfall.series", {c, kPaperSeeds[rep]});
      const auto series = rainfall::rainfall_series(cfg, s);
      for (std::size_t o = 0; o < rainfall::kModels.size(); ++o) {
        const auto sc = rainfall::regressor_scores(rainfall::kModels[o], series, s);
        t.set(c, o, 0, rep, sc.mse);
        t.set(c, o, 1, rep, sc.rmse);
        t.set(c, o, 2, rep, sc.mae);
        if (!staggered) continue;
        const auto st = o + 1 == rainfall::kModels.size()
                            ? sc
                            : rainfall::regressor_scores(rainfall::kModels[o],
                                                         rainfall::staggered_series(series, o + 1), s);
        staggered->set(c, o, 0, rep, st.mse);
        staggered->set(c, o, 1, rep, st.rmse);
        staggered->set(c, o, 2, rep, st.mae);
      }
    }
  });
  return t;
}

inline ResultTable synth_population(std::uint64_t seed, std::size_t jobs) {
  ResultTable t = ResultTable::for_task(3);
  const EcSpace& space = t.space();
  parallel_for(space.size(), jobs, [&](std::size_t c) {
    const auto cfg = population::config_from(space.config_at(c));
    for (std::size_t o = 0; o < population::kSpecies.size(); ++o)
      for (std::size_t rep = 0; rep < kPaperSeeds.size(); ++rep) {
        const auto hist = population::simulate_colony(cfg, population::kSpecies[o],
                                                      derive_seed(seed, "population", {c, o, kPaperSeeds[rep]}));
        const auto ix = population::stability_indexes(hist);
        t.set(c, o, 0, rep, ix.avg_pop);
        t.set(c, o, 1, rep, ix.std_pop);
        t.set(c, o, 2, rep, ix.half_life);
        t.set(c, o, 3, rep, ix.growth_rate);
      }
  });
  return t;
}

/// Per-material absolute and symmetric percentage errors of each model,
/// fitted once on a seeded 70% split.
inline ResultTable synth_energy(std::uint64_t seed) {
  ResultTable t = ResultTable::for_task(4);
  const auto materials = energy::enumerate_materials();
  std::vector<double> y(materials.size());
  for (std::size_t i = 0; i < materials.size(); ++i)
    y[i] = energy::formation_energy(materials[i], derive_seed(seed, "energy.noise", {i}));
  const std::uint64_t split = derive_seed(seed, "energy.split");
  const auto [train, test] = energy::split_indices(materials.size(), split);
  for (std::size_t o = 0; o < energy::kModels.size(); ++o) {
    const auto pred = energy::fit_predict(energy::kModels[o], materials, y, train, split);
    for (std::size_t c = 0; c < materials.size(); ++c) {
      t.set(c, o, 0, 0, energy::abs_percentage_error(pred[c], y[c]));
      t.set(c, o, 1, 0, energy::sym_percentage_error(pred[c], y[c]));
    }
  }
  return t;
}

inline ResultTable synth_randomness(std::size_t jobs) {
  ResultTable t = ResultTable::for_task(5);
  const EcSpace& space = t.space();
  parallel_for(space.size(), jobs, [&](std::size_t c) {
    const auto seq = randomness::logistic_sequence(randomness::config_from(space.config_at(c)));
    for (std::size_t o = 0; o < randomness::kTests.size(); ++o) {
      const auto v = randomness::run_test(randomness::kTests[o], seq);
      t.set(c, o, 0, 0, v.declared_random ? 0.0 : 1.0);
      t.set(c, o, 1, 0, v.p_value);
    }
  });
  return t;
}

inline ResultTable synth_games(std::uint64_t seed, std::size_t jobs) {
  ResultTable t = ResultTable::for_task(6);
  const EcSpace& space = t.space();
  parallel_for(space.size(), jobs, [&](std::size_t c) {
    const auto cfg = games::config_from(space.config_at(c));
    for (std::size_t rep = 0; rep < kPaperSeeds.size(); ++rep) {
      const std::uint64_t s = derive_seed(seed, "games", {c, kPaperSeeds[rep]});
      for (std::size_t o = 0; o < games::kStrategies.size(); ++o) {
        const auto sc = games::tournament_scores(games::kStrategies[o], cfg, s);
        t.set(c, o, 0, rep, sc.total_earning);
        t.set(c, o, 1, rep, sc.net_earning);
      }
    }
  });
  return t;
}

}  // namespace detail

/// Evaluates a simulated task over its whole EC space.
inline ResultTable synth_result_table(int task, std::uint64_t seed, std::size_t jobs = 0) {
  switch (task) {
    case 1: return detail::synth_chaos(jobs);
    case 2: return detail::synth_rainfall(seed, jobs, nullptr);
    case 3: return detail::synth_population(seed, jobs);
    case 4: return detail::synth_energy(seed);
    case 5: return detail::synth_randomness(jobs);
    case 6: return detail::synth_games(seed, jobs);
    default: break;
  }
  throw UsageError("only tasks 1-6 can be synthesized");
}

// ---------------------------------------------------------------------------
// Cache

inline std::filesystem::path cache_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv("AXIA_CACHE_DIR"); env && *env) return env;
  return ".axia-cache";
}

inline std::filesystem::path table_path(const std::filesystem::path& dir, int task, std::uint64_t seed) {
  return dir / ("task" + std::to_string(task) + "-seed" + std::to_string(seed) + ".csv");
}

inline std::filesystem::path stagger_path(const std::filesystem::path& dir, std::uint64_t seed) {
  return dir / ("task2-stagger-seed" + std::to_string(seed) + ".csv");
}

inline std::filesystem::path ingested_path(const std::filesystem::path& dir, int task) {
  return dir / ("task" + std::to_string(task) + "-ingested.csv");
}

/// Synthesizes and caches a task table (plus the staggered table for task 2)
/// unless it is already cached.
inline void ensure_synthesized(int task, std::uint64_t seed, const std::filesystem::path& dir, std::size_t jobs = 0) {
  if (task < 1 || task > 6) throw UsageError("only tasks 1-6 can be synthesized");
  const auto path = table_path(dir, task, seed);
  if (task == 2) {
    if (std::filesystem::exists(path) && std::filesystem::exists(stagger_path(dir, seed))) return;
    ResultTable st;
    const ResultTable t = detail::synth_rainfall(seed, jobs, &st);
    save_result_table(st, stagger_path(dir, seed));
    save_result_table(t, path);
    return;
  }
  if (std::filesystem::exists(path)) return;
  save_result_table(synth_result_table(task, seed, jobs), path);
}

/// Table for any catalog task: tasks 1-6 from the cache (synthesized on a
/// miss), tasks 7-8 from a previously ingested file.
inline ResultTable load_task_table(int task, std::uint64_t seed, const std::filesystem::path& dir,
                                   std::size_t jobs = 0, bool allow_sparse = false) {
  if (task == 7 || task == 8) {
    const auto p = ingested_path(dir, task);
    if (!std::filesystem::exists(p))
      throw DataError("no ingested table for task " + std::to_string(task) + " in " + dir.string() +
                      " (run `axia ingest` first)");
    return load_result_table(p, {allow_sparse});
  }
  ensure_synthesized(task, seed, dir, jobs);
  return load_result_table(table_path(dir, task, seed));
}

inline ResultTable load_stagger_table(std::uint64_t seed, const std::filesystem::path& dir, std::size_t jobs = 0) {
  ensure_synthesized(2, seed, dir, jobs);
  return load_result_table(stagger_path(dir, seed));
}

}  // namespace axia
