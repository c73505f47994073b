// axia: synthesize or ingest result tables, compute ground truth, run
// evaluation methods and write curves, reports and plots.
//
// Exit status: 0 ok, 1 usage error, 2 data error, 3 method not applicable.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "axia/axia.hpp"

namespace {

using namespace axia;

struct Common {
  std::vector<int> tasks;
  std::vector<std::string> methods;
  std::vector<std::size_t> budgets;
  std::vector<std::string> objects;
  std::vector<std::string> indexes;
  std::size_t k = kDefaultRuns;
  double level = kDefaultLevel;
  std::uint64_t seed = 0;
  std::string rule = "paper";
  std::string cache;
  std::string out;
  std::size_t jobs = 1;
  bool allow_sparse = false;
  bool paper_seeds = false;
};

std::optional<std::string> cache_flag(const Common& c) {
  if (c.cache.empty()) return std::nullopt;
  return c.cache;
}

std::vector<std::uint64_t> seeds(const Common& c) {
  if (c.paper_seeds) return {kPaperSeeds.begin(), kPaperSeeds.end()};
  return {c.seed};
}

std::string per_seed_out(const Common& c, std::uint64_t seed) {
  if (!c.paper_seeds) return c.out;
  return (std::filesystem::path(c.out) / ("seed" + std::to_string(seed))).string();
}

RunManifest manifest_from(const Common& c, std::uint64_t seed) {
  RunManifest m;
  m.tasks = c.tasks;
  m.methods = c.methods;
  if (!c.budgets.empty()) m.budgets = c.budgets;
  m.k = c.k;
  m.level = c.level;
  m.seed = seed;
  m.rule = parse_ci_rule(c.rule);
  m.out = per_seed_out(c, seed);
  if (!c.cache.empty()) m.cache_dir = c.cache;
  m.objects = c.objects;
  m.indexes = c.indexes;
  m.allow_sparse = c.allow_sparse;
  return m;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

int cmd_list() {
  std::printf("tasks\n");
  for (int t = 1; t <= kTaskCount; ++t) {
    const auto& info = task_info(t);
    const auto space = task_space(t);
    std::printf("  %d %-10s configs=%zu r=%zu %s\n", t, info.name.c_str(), space.size(), info.repetitions,
                info.simulated ? "simulated" : "ingested");
    std::string objs, idx;
    for (const auto& o : info.objects) objs += (objs.empty() ? "" : ", ") + o;
    for (const auto& i : info.indexes) idx += (idx.empty() ? "" : ", ") + i;
    std::printf("      objects: %s\n      indexes: %s\n", objs.c_str(), idx.c_str());
  }
  std::printf("methods\n");
  std::printf("  %-11s", "");
  for (int t = 1; t <= kTaskCount; ++t) std::printf(" T%d", t);
  std::printf("\n");
  for (auto k : kMethodKinds) {
    std::printf("  %-11s", std::string(to_string(k)).c_str());
    for (int t = 1; t <= kTaskCount; ++t) std::printf(" %s", design_matrix_allows(k, t) ? " +" : " -");
    std::printf("\n");
  }
  return 0;
}

int cmd_synth(const Common& c) {
  require(!c.tasks.empty(), "synth needs --task");
  const auto dir = cache_dir(cache_flag(c));
  for (auto seed : seeds(c))
    for (int t : c.tasks) {
      ensure_synthesized(t, seed, dir, c.jobs);
      std::printf("%s\n", table_path(dir, t, seed).string().c_str());
      if (t == 2) std::printf("%s\n", stagger_path(dir, seed).string().c_str());
    }
  return 0;
}

int cmd_ingest(const Common& c, const std::string& file) {
  require(!file.empty(), "ingest needs --file");
  const ResultTable t = load_result_table(file, {c.allow_sparse});
  if (!c.tasks.empty() && c.tasks.front() != t.task())
    throw DataError("file declares task " + std::to_string(t.task()) + ", not " + std::to_string(c.tasks.front()));
  const auto path = ingested_path(cache_dir(cache_flag(c)), t.task());
  save_result_table(t, path);
  std::printf("%s: task %d, %zu configs, %zu objects, %zu indexes, r=%zu, %zu missing\n", path.string().c_str(),
              t.task(), t.configs(), t.objects().size(), t.indexes().size(), t.repetitions(), t.missing());
  return 0;
}

int cmd_gt(const Common& c) {
  require(!c.tasks.empty(), "gt needs --task");
  const auto dir = cache_dir(cache_flag(c));
  for (auto seed : seeds(c)) {
    std::string text = gt_csv_header();
    for (int t : c.tasks) {
      const ResultTable table = load_task_table(t, seed, dir, c.jobs, c.allow_sparse);
      text += gt_csv_rows(table, select_ids(table.objects(), c.objects), select_ids(table.indexes(), c.indexes));
    }
    if (c.out.empty()) {
      std::fputs(text.c_str(), stdout);
    } else {
      const auto out = std::filesystem::path(per_seed_out(c, seed)) / "gt.csv";
      write_text_file(out, text);
      std::printf("%s\n", out.string().c_str());
    }
  }
  return 0;
}

int cmd_curve(const Common& c) {
  require(c.tasks.size() == 1, "curve needs exactly one --task");
  require(c.methods.size() == 1, "curve needs exactly one --method");
  require(!c.out.empty(), "curve needs --out");
  check_design_matrix(parse_method_spec(c.methods[0]), c.tasks[0]);
  for (auto seed : seeds(c)) {
    const auto m = manifest_from(c, seed);
    const auto dir = cache_dir(m.cache_dir);
    const ResultTable table = load_task_table(m.tasks[0], seed, dir, c.jobs, c.allow_sparse);
    std::optional<ResultTable> st;
    if (table.task() == 2) st = load_stagger_table(seed, dir, c.jobs);
    const MethodInputs in{table, st ? &*st : nullptr};
    const MethodSpec spec = parse_method_spec(m.methods[0]);
    check_applicable(spec, in);
    const EvalOptions opt{m.k, m.level, seed, m.rule, c.jobs};
    for (auto o : select_ids(table.objects(), m.objects))
      for (auto i : select_ids(table.indexes(), m.indexes)) {
        const Curve curve = build_curve(spec, in, o, i, m.budgets, opt);
        const auto path = curve_path(m.out, curve);
        write_text_file(path, curve_csv_text(curve));
        const auto ca = c_at_09a(curve);
        std::printf("%s  C@0.9A=%s\n", path.string().c_str(), ca ? std::to_string(*ca).c_str() : "inf");
      }
  }
  return 0;
}

int cmd_run(const Common& c, const std::string& manifest_file) {
  std::vector<RunManifest> runs;
  if (!manifest_file.empty()) {
    runs.push_back(read_manifest(manifest_file));
  } else {
    require(!c.tasks.empty(), "report needs --task or a manifest");
    require(!c.out.empty(), "report needs --out");
    for (auto seed : seeds(c)) runs.push_back(manifest_from(c, seed));
  }
  for (const auto& m : runs) {
    const auto res = run_manifest(m, c.jobs);
    write_text_file(std::filesystem::path(m.out) / "manifest.json", to_json(m).dump(2) + "\n");
    std::printf("%s: %zu curves, %zu skipped\n", m.out.c_str(), res.curves.size(), res.skipped.size());
  }
  return 0;
}

Curve read_curve_csv(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw DataError("cannot open " + p.string());
  std::string line;
  if (!std::getline(in, line) || line != "cost,accuracy") throw DataError(p.string() + ": expected 'cost,accuracy'");
  Curve c;
  c.method = p.parent_path().filename().string();
  c.object = p.stem().string();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DataError(p.string() + ": malformed row");
    CurvePoint pt;
    try {
      pt.cost = static_cast<std::size_t>(std::stoull(line.substr(0, comma)));
    } catch (const std::exception&) {
      throw DataError(p.string() + ": malformed cost");
    }
    pt.accuracy = detail::parse_double_strict(line.substr(comma + 1));
    c.points.push_back(pt);
  }
  return c;
}

int cmd_plot(const std::vector<std::string>& inputs, const std::string& out, const std::string& title) {
  require(!inputs.empty(), "plot needs --input");
  require(!out.empty(), "plot needs --out");
  std::vector<Curve> curves;
  for (const auto& p : inputs) curves.push_back(read_curve_csv(p));
  write_text_file(out, svg_plot(curves, title));
  std::printf("%s\n", out.c_str());
  return 0;
}

void add_common(CLI::App* s, Common& c, bool methods) {
  s->add_option("--task", c.tasks, "Task id(s)")->delimiter(',');
  if (methods) {
    s->add_option("--method", c.methods, "Method spec(s), kind[:key=value,...]");
    s->add_option("--budgets", c.budgets, "Budgets, comma separated")->delimiter(',');
    s->add_option("--k", c.k, "Runs per accuracy point")->check(CLI::PositiveNumber);
    s->add_option("--level", c.level, "Confidence level")->check(CLI::Range(0.0, 1.0));
    s->add_option("--ci-rule", c.rule, "paper | conventional")->check(CLI::IsMember({"paper", "conventional"}));
  }
  s->add_option("--object", c.objects, "Restrict to object(s)")->delimiter(',');
  s->add_option("--index", c.indexes, "Restrict to index(es)")->delimiter(',');
  s->add_option("--seed", c.seed, "Master seed");
  s->add_flag("--paper-seeds", c.paper_seeds, "Use master seeds 0, 37 and 42");
  s->add_option("--cache-dir", c.cache, "Table cache (default $AXIA_CACHE_DIR or .axia-cache)");
  s->add_option("--out", c.out, "Output directory or file");
  s->add_option("--jobs", c.jobs, "Worker threads (0 = all cores)");
  s->add_flag("--allow-sparse", c.allow_sparse, "Accept tables with missing entries");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluation methods over materialized EC spaces"};
  app.require_subcommand(1);
  Common c;
  std::string file, manifest, title = "accuracy vs cost";
  std::vector<std::string> inputs;

  auto* list = app.add_subcommand("list", "Tasks, methods and applicability");
  auto* synth = app.add_subcommand("synth", "Materialize simulated task tables into the cache");
  add_common(synth, c, false);
  auto* ingest = app.add_subcommand("ingest", "Validate an external table and copy it into the cache");
  add_common(ingest, c, false);
  ingest->add_option("--file", file, "CSV with a .space sidecar")->required();
  auto* gt = app.add_subcommand("gt", "Ground truth per (task, object, index)");
  add_common(gt, c, false);
  auto* curve = app.add_subcommand("curve", "Accuracy-cost curves for one method on one task");
  add_common(curve, c, true);
  auto* report = app.add_subcommand("report", "Curves for many tasks and methods plus report.json");
  add_common(report, c, true);
  auto* run = app.add_subcommand("run", "Execute a JSON run manifest");
  add_common(run, c, false);
  run->add_option("manifest", manifest, "Manifest file")->required();
  auto* plot = app.add_subcommand("plot", "SVG from curve CSV files");
  plot->add_option("--input", inputs, "Curve CSV file(s)")->required();
  plot->add_option("--out", c.out, "SVG path")->required();
  plot->add_option("--title", title, "Plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (list->parsed()) return cmd_list();
    if (synth->parsed()) return cmd_synth(c);
    if (ingest->parsed()) return cmd_ingest(c, file);
    if (gt->parsed()) return cmd_gt(c);
    if (curve->parsed()) return cmd_curve(c);
    if (report->parsed()) return cmd_run(c, "");
    if (run->parsed()) return cmd_run(c, manifest);
    if (plot->parsed()) return cmd_plot(inputs, c.out, title);
  } catch (const NotApplicable& e) {
    std::fprintf(stderr, "not applicable: %s\n", e.what());
    return 3;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
