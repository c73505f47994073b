#pragma once

/// A run manifest names tasks, methods, budgets, K, level, seed and output
/// directory. Running it writes, under `out`:
///   task<T>/<method>/<object>__<index>.csv   one curve each
///   gt.csv                                  ground truth per (task, object, index)
///   report.json                             per-method summary
///   skipped.txt                             (task, method) pairs that were not applicable
/// Every file depends only on the manifest and the cached tables.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "axia/errors.hpp"
#include "axia/meta.hpp"
#include "axia/methods.hpp"
#include "axia/parallel.hpp"
#include "axia/result_table.hpp"
#include "axia/synth.hpp"

namespace axia {

struct RunManifest {
  std::vector<int> tasks;
  std::vector<std::string> methods;  // empty: every method kind with default parameters
  std::vector<std::size_t> budgets = default_budgets();
  std::size_t k = kDefaultRuns;
  double level = kDefaultLevel;
  std::uint64_t seed = 0;
  CiRule rule = CiRule::paper;
  std::string out = "axia-out";
  std::optional<std::string> cache_dir;
  std::vector<std::string> objects;  // empty: all
  std::vector<std::string> indexes;  // empty: all
  bool allow_sparse = false;
};

inline nlohmann::ordered_json to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tasks"] = m.tasks;
  j["methods"] = m.methods;
  j["budgets"] = m.budgets;
  j["k"] = m.k;
  j["level"] = m.level;
  j["seed"] = m.seed;
  j["ci_rule"] = std::string(to_string(m.rule));
  j["out"] = m.out;
  if (m.cache_dir) j["cache_dir"] = *m.cache_dir;
  if (!m.objects.empty()) j["objects"] = m.objects;
  if (!m.indexes.empty()) j["indexes"] = m.indexes;
  if (m.allow_sparse) j["allow_sparse"] = true;
  return j;
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("manifest must be a JSON object");
  static const std::vector<std::string> known{"tasks", "methods", "budgets",  "k",       "level",        "seed",
                                              "ci_rule", "out",   "cache_dir", "objects", "indexes", "allow_sparse"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw UsageError("unknown manifest field '" + key + "'");
  RunManifest m;
  try {
    m.tasks = j.at("tasks").get<std::vector<int>>();
    if (j.contains("methods")) m.methods = j["methods"].get<std::vector<std::string>>();
    if (j.contains("budgets")) m.budgets = j["budgets"].get<std::vector<std::size_t>>();
    if (j.contains("k")) m.k = j["k"].get<std::size_t>();
    if (j.contains("level")) m.level = j["level"].get<double>();
    if (j.contains("seed")) m.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("ci_rule")) m.rule = parse_ci_rule(j["ci_rule"].get<std::string>());
    if (j.contains("out")) m.out = j["out"].get<std::string>();
    if (j.contains("cache_dir")) m.cache_dir = j["cache_dir"].get<std::string>();
    if (j.contains("objects")) m.objects = j["objects"].get<std::vector<std::string>>();
    if (j.contains("indexes")) m.indexes = j["indexes"].get<std::vector<std::string>>();
    if (j.contains("allow_sparse")) m.allow_sparse = j["allow_sparse"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad manifest: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("bad manifest: ") + e.what());
  }
  if (m.tasks.empty()) throw UsageError("manifest lists no tasks");
  if (m.k < 1) throw UsageError("k must be at least 1");
  if (!(m.level > 0.0 && m.level < 1.0)) throw UsageError("level must be in (0, 1)");
  return m;
}

inline RunManifest read_manifest(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw UsageError("cannot open manifest " + p.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("manifest is not valid JSON: " + std::string(e.what()));
  }
  return manifest_from_json(j);
}

inline std::string file_token(std::string s) {
  for (char& c : s)
    if (c == ':' || c == ',' || c == '/' || c == ' ') c = '_';
    else if (c == '=') c = '-';
  return s;
}

inline std::filesystem::path curve_path(const std::filesystem::path& out, const Curve& c) {
  return out / ("task" + std::to_string(c.task)) / file_token(c.method) /
         (file_token(c.object) + "__" + file_token(c.index) + ".csv");
}

inline std::string gt_csv_header() { return "task,object,index,mean,std,configs,repetitions\n"; }

inline std::string gt_csv_rows(const ResultTable& t, const std::vector<std::size_t>& objects,
                               const std::vector<std::size_t>& indexes) {
  std::string out;
  for (auto o : objects)
    for (auto i : indexes) {
      const auto g = ground_truth(t, o, i);
      out += std::to_string(t.task()) + "," + t.objects()[o] + "," + t.indexes()[i] + "," + format_double(g.mean) +
             "," + format_double(g.std) + "," + std::to_string(g.configs) + "," + std::to_string(t.repetitions()) +
             "\n";
    }
  return out;
}

inline std::vector<std::size_t> select_ids(const std::vector<std::string>& all, const std::vector<std::string>& want) {
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (want.empty() || std::find(want.begin(), want.end(), all[i]) != want.end()) ids.push_back(i);
  return ids;
}

struct RunOutcome {
  std::vector<Curve> curves;
  std::vector<std::string> skipped;
};

inline RunOutcome run_manifest(const RunManifest& m, std::size_t jobs = 1) {
  const auto dir = cache_dir(m.cache_dir);
  const std::filesystem::path out(m.out);
  std::vector<MethodSpec> specs;
  if (m.methods.empty())
    for (auto k : kMethodKinds) specs.push_back(MethodSpec{k});
  else
    for (const auto& s : m.methods) specs.push_back(parse_method_spec(s));

  RunOutcome res;
  std::string gt = gt_csv_header();
  for (int task : m.tasks) {
    const ResultTable table = load_task_table(task, m.seed, dir, jobs, m.allow_sparse);
    std::optional<ResultTable> staggered;
    if (task == 2) staggered = load_stagger_table(m.seed, dir, jobs);
    const MethodInputs in{table, staggered ? &*staggered : nullptr};
    const auto objects = select_ids(table.objects(), m.objects);
    const auto indexes = select_ids(table.indexes(), m.indexes);
    gt += gt_csv_rows(table, objects, indexes);
    for (const auto& spec : specs) {
      if (spec.task && *spec.task != task) continue;
      try {
        check_applicable(spec, in);
      } catch (const NotApplicable& e) {
        res.skipped.push_back(std::to_string(task) + " " + to_string(spec) + ": " + e.what());
        continue;
      }
      std::vector<std::pair<std::size_t, std::size_t>> work;
      for (auto o : objects)
        for (auto i : indexes) work.emplace_back(o, i);
      std::vector<Curve> curves(work.size());
      const EvalOptions opt{m.k, m.level, m.seed, m.rule, 1};
      parallel_for(work.size(), jobs, [&](std::size_t w) {
        curves[w] = build_curve(spec, in, work[w].first, work[w].second, m.budgets, opt);
      });
      for (auto& c : curves) {
        write_text_file(curve_path(out, c), curve_csv_text(c));
        res.curves.push_back(std::move(c));
      }
    }
  }
  write_text_file(out / "gt.csv", gt);
  std::string skipped;
  for (const auto& s : res.skipped) skipped += s + "\n";
  write_text_file(out / "skipped.txt", skipped);
  write_text_file(out / "report.json", build_report(res.curves).dump(2) + "\n");
  return res;
}

}  // namespace axia
