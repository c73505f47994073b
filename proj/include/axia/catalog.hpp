#pragma once

/// Static description of the eight tasks: EC space, objects, indexes,
/// repetitions and the observation-method factor distribution.

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "axia/ec_space.hpp"
#include "axia/errors.hpp"
#include "axia/tasks/chaos.hpp"
#include "axia/tasks/energy.hpp"
#include "axia/tasks/games.hpp"
#include "axia/tasks/population.hpp"
#include "axia/tasks/rainfall.hpp"
#include "axia/tasks/randomness.hpp"

namespace axia {

inline constexpr int kTaskCount = 8;

struct TaskInfo {
  int id = 0;
  std::string name;
  std::vector<std::string> objects;
  std::vector<std::string> indexes;
  std::size_t repetitions = 1;
  bool simulated = true;
  std::optional<DistributionFamily> observation;
};

namespace detail {

inline EcSpace cpu_space() {
  Factor th{"th", {}, "threads"};
  for (int i = 1; i <= 128; ++i) th.values.push_back(std::to_string(i));
  for (int v : {200, 256, 300}) th.values.push_back(std::to_string(v));
  Factor c{"c", {"O1", "O2", "O3"}, ""};
  Factor size{"size", {}, ""};
  for (int i = 1; i <= 10; ++i) size.values.push_back(std::to_string(i));
  return EcSpace({th, c, size});
}

inline EcSpace llm_space() {
  Factor sh{"sh", {}, "shots"};
  for (int i = 0; i <= 7; ++i) sh.values.push_back(std::to_string(i));
  Factor cot{"cot", {"none", "COT1", "COT2", "COT3"}, ""};
  Factor p{"p", {"none", "swap 2 wrong choices", "swap 1 correct and 1 wrong choices", "swap all"}, ""};
  Factor lan{"lan", {"Chinese", "English", "German"}, ""};
  Factor mod{"mod", {"none", "random"}, ""};
  Factor role{"role", {"none", "mathematician", "student", "math teacher"}, ""};
  return EcSpace({sh, cot, p, lan, mod, role});
}

}  // namespace detail

inline const TaskInfo& task_info(int task) {
  static const std::array<TaskInfo, kTaskCount> tasks{{
      {1, "chaos", {"lorenz", "roessler"}, {"lyapunov", "ks"}, 1, true, DistributionFamily::power},
      {2,
       "rainfall",
       {"linear", "spline-additive", "tree-bagger", "fourier-basis"},
       {"mse", "rmse", "mae"},
       3,
       true,
       DistributionFamily::gaussian},
      {3,
       "population",
       {"bacteria", "yeast", "algae"},
       {"avg_pop", "std_pop", "half_life", "growth_rate"},
       3,
       true,
       DistributionFamily::mixed_log},
      {4,
       "energy",
       {"mean-by-pattern", "bond-count-linear", "least-squares", "margin-regressor"},
       {"mape", "smape"},
       1,
       true,
       std::nullopt},
      {5,
       "randomness",
       {"frequency", "runs", "overlapping_permutations", "birthday_spacings"},
       {"true_rate", "avg_p"},
       1,
       true,
       std::nullopt},
      {6,
       "games",
       {"always_defect", "always_cooperate", "tit_for_tat", "generous_tft", "mixed", "consequence"},
       {"total_earning", "net_earning"},
       3,
       true,
       std::nullopt},
      {7, "cpu", {"CPU_A", "CPU_B"}, {"running_time"}, 3, false, std::nullopt},
      {8, "llm", {"gpt-4o-mini", "dschat", "qwen-2.5"}, {"accuracy"}, 3, false, std::nullopt},
  }};
  if (task < 1 || task > kTaskCount) throw UsageError("task must be in 1.." + std::to_string(kTaskCount));
  return tasks[static_cast<std::size_t>(task - 1)];
}

inline EcSpace task_space(int task) {
  switch (task) {
    case 1: return chaos::make_space();
    case 2: return rainfall::make_space();
    case 3: return population::make_space();
    case 4: return energy::make_space();
    case 5: return randomness::make_space();
    case 6: return games::make_space();
    case 7: return detail::cpu_space();
    case 8: return detail::llm_space();
    default: break;
  }
  throw UsageError("task must be in 1.." + std::to_string(kTaskCount));
}

inline bool is_known_task(int task) noexcept { return task >= 1 && task <= kTaskCount; }

}  // namespace axia
