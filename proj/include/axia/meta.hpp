#pragma once

/// Scoring methods against the ground truth: accuracy at a budget, the
/// accuracy-cost curve, C@0.9A and the per-method summary report.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "axia/errors.hpp"
#include "axia/methods.hpp"
#include "axia/parallel.hpp"
#include "axia/result_table.hpp"
#include "axia/rng.hpp"
#include "axia/stats.hpp"

namespace axia {

inline constexpr double kTargetAccuracy = 0.9;
inline constexpr std::size_t kDefaultRuns = 50;
inline constexpr double kDefaultLevel = 0.95;

inline std::vector<std::size_t> default_budgets() { return {10, 20, 30, 40, 60, 100, 150, 200}; }

struct GroundTruth {
  double mean = 0.0;
  double std = 0.0;
  std::size_t configs = 0;
};

/// Mean and population std over every configuration (each averaged over all
/// repetitions), summed in ordinal order.
inline GroundTruth ground_truth(const ResultTable& t, std::size_t object, std::size_t index) {
  t.require_complete();
  std::vector<double> v(t.configs());
  for (std::size_t c = 0; c < v.size(); ++c) v[c] = t.config_value(c, object, index);
  const auto ms = mean_std(v);
  return {ms.mean, ms.std, v.size()};
}

struct EvalOptions {
  std::size_t runs = kDefaultRuns;
  double level = kDefaultLevel;
  std::uint64_t seed = 0;
  CiRule rule = CiRule::paper;
  std::size_t jobs = 1;
};

struct AccuracyResult {
  double accuracy = 0.0;
  std::size_t cost = 0;  // cost of one run
};

/// Fraction of K independent runs whose interval contains the ground truth.
/// Run i is seeded with derive_seed(seed, method string, {i}).
inline AccuracyResult accuracy_at(const MethodSpec& s, const MethodInputs& in, std::size_t object, std::size_t index,
                                  std::size_t amount, double truth, const EvalOptions& opt) {
  if (opt.runs < 1) throw UsageError("K must be at least 1");
  const std::string label = to_string(s);
  std::vector<Interval> iv(opt.runs);
  std::vector<std::size_t> costs(opt.runs);
  parallel_for(opt.runs, opt.jobs, [&](std::size_t i) {
    const auto e = run_method(s, in, object, index, amount, derive_seed(opt.seed, label, {i}));
    iv[i] = confidence_interval(e, opt.level, opt.rule);
    costs[i] = e.cost;
  });
  return {coverage_accuracy(iv, truth), *std::max_element(costs.begin(), costs.end())};
}

struct CurvePoint {
  std::size_t cost = 0;
  double accuracy = 0.0;
};

struct Curve {
  std::string method;
  int task = 0;
  std::string object;
  std::string index;
  std::size_t k = 0;
  double level = 0.0;
  std::vector<CurvePoint> points;
};

/// Accuracy at every legal cost point of the method, ascending in cost.
inline Curve build_curve(const MethodSpec& s, const MethodInputs& in, std::size_t object, std::size_t index,
                         const std::vector<std::size_t>& budgets, const EvalOptions& opt) {
  const ResultTable& t = in.table;
  const double truth = ground_truth(t, object, index).mean;
  Curve c{to_string(s), t.task(), t.objects().at(object), t.indexes().at(index), opt.runs, opt.level, {}};
  for (const auto& p : cost_points(s, in, object, budgets)) {
    const auto r = accuracy_at(s, in, object, index, p.amount, truth, opt);
    if (!c.points.empty() && c.points.back().cost == r.cost) continue;
    c.points.push_back({r.cost, r.accuracy});
  }
  return c;
}

/// Smallest cost whose accuracy reaches 0.9; nullopt when none does.
inline std::optional<std::size_t> c_at_09a(const Curve& c) {
  for (const auto& p : c.points)
    if (p.accuracy >= kTargetAccuracy) return p.cost;
  return std::nullopt;
}

inline std::string cost_class(std::size_t cost) {
  if (cost <= 100) return "low";
  if (cost <= 1000) return "middle";
  return "high";
}

// ---------------------------------------------------------------------------
// Output

inline std::string curve_csv_text(const Curve& c) {
  std::string out = "cost,accuracy\n";
  for (const auto& p : c.points) out += std::to_string(p.cost) + "," + format_double(p.accuracy) + "\n";
  return out;
}

inline void write_text_file(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DataError("cannot write " + p.string());
  out << text;
}

namespace detail {

struct Summary {
  double acc_lo = 1.0, acc_hi = 0.0;
  std::optional<std::size_t> c_lo, c_hi;  // nullopt = infinity
  bool c_any = false;
  std::vector<std::size_t> class_costs;
  std::size_t curves = 0;

  void add(const Curve& c) {
    if (c.points.empty()) return;
    ++curves;
    const double final_acc = c.points.back().accuracy;
    acc_lo = std::min(acc_lo, final_acc);
    acc_hi = std::max(acc_hi, final_acc);
    const auto ca = c_at_09a(c);
    auto less = [](const std::optional<std::size_t>& a, const std::optional<std::size_t>& b) {
      if (!a) return false;
      if (!b) return true;
      return *a < *b;
    };
    if (!c_any || less(ca, c_lo)) c_lo = ca;
    if (!c_any || less(c_hi, ca)) c_hi = ca;
    c_any = true;
    class_costs.push_back(ca ? *ca : c.points.back().cost);
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    auto cval = [](const std::optional<std::size_t>& v) -> nlohmann::ordered_json {
      if (v) return *v;
      return "inf";
    };
    j["curves"] = curves;
    if (curves == 0) return j;
    j["accuracy_range"] = {acc_lo, acc_hi};
    j["c_at_09a_range"] = {cval(c_lo), cval(c_hi)};
    auto costs = class_costs;
    std::sort(costs.begin(), costs.end());
    j["cost_class"] = cost_class(costs[(costs.size() - 1) / 2]);
    return j;
  }
};

}  // namespace detail

/// Per-method summary over a set of curves, also broken down by task,
/// object and index.
inline nlohmann::ordered_json build_report(const std::vector<Curve>& curves) {
  std::map<std::string, std::vector<const Curve*>> by_method;
  for (const auto& c : curves) {
    const auto colon = c.method.find(':');
    by_method[c.method.substr(0, colon)].push_back(&c);
  }
  nlohmann::ordered_json report;
  report["target_accuracy"] = kTargetAccuracy;
  nlohmann::ordered_json methods = nlohmann::ordered_json::object();
  for (const auto& [name, list] : by_method) {
    detail::Summary all;
    std::map<std::string, detail::Summary> task, object, index;
    for (const Curve* c : list) {
      all.add(*c);
      task[std::to_string(c->task)].add(*c);
      object[std::to_string(c->task) + "/" + c->object].add(*c);
      index[std::to_string(c->task) + "/" + c->index].add(*c);
    }
    auto j = all.to_json();
    for (const auto& [key, group] : {std::pair{"by_task", &task}, {"by_object", &object}, {"by_index", &index}}) {
      nlohmann::ordered_json g = nlohmann::ordered_json::object();
      for (const auto& [k, s] : *group) g[k] = s.to_json();
      j[key] = g;
    }
    methods[name] = j;
  }
  report["methods"] = methods;
  return report;
}

/// Accuracy against cost with a dashed 0.9 guide; costs on a log axis.
inline std::string svg_plot(const std::vector<Curve>& curves, const std::string& title) {
  constexpr double W = 720, H = 440, L = 60, R = 180, T = 40, B = 50;
  std::size_t cmin = SIZE_MAX, cmax = 1;
  for (const auto& c : curves)
    for (const auto& p : c.points) {
      cmin = std::min(cmin, std::max<std::size_t>(p.cost, 1));
      cmax = std::max(cmax, p.cost);
    }
  if (cmin == SIZE_MAX) cmin = 1;
  const double lx0 = std::log10(static_cast<double>(cmin)), lx1 = std::max(lx0 + 1.0, std::log10(double(cmax)));
  auto x = [&](std::size_t cost) {
    const double lc = std::log10(static_cast<double>(std::max<std::size_t>(cost, 1)));
    return L + (lc - lx0) / (lx1 - lx0) * (W - L - R);
  };
  auto y = [&](double a) { return T + (1.0 - a) * (H - T - B); };
  static const char* colours[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  auto esc = [](const std::string& s) {
    std::string o;
    for (char ch : s) {
      if (ch == '<') o += "&lt;";
      else if (ch == '>') o += "&gt;";
      else if (ch == '&') o += "&amp;";
      else o += ch;
    }
    return o;
  };
  char buf[256];
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << L << "\" y=\"24\" font-size=\"14\">" << esc(title) << "</text>\n";
  std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", L, H - B,
                W - R, H - B);
  os << buf;
  std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", L, T, L, H - B);
  os << buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"grey\" stroke-dasharray=\"4 4\"/>\n", L,
                y(kTargetAccuracy), W - R, y(kTargetAccuracy));
  os << buf;
  for (double a : {0.0, 0.5, 0.9, 1.0}) {
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"10\" text-anchor=\"end\">%g</text>\n", L - 4,
                  y(a) + 3, a);
    os << buf;
  }
  for (double d = std::ceil(lx0); d <= lx1 + 1e-9; d += 1.0) {
    const auto cost = static_cast<std::size_t>(std::llround(std::pow(10.0, d)));
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"10\" text-anchor=\"middle\">%zu</text>\n",
                  x(cost), H - B + 14, cost);
    os << buf;
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" font-size=\"11\" text-anchor=\"middle\">cost</text>\n";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const char* col = colours[i % 10];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" points=\"";
    for (const auto& p : c.points) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", x(p.cost), y(p.accuracy));
      os << buf;
    }
    os << "\"/>\n";
    for (const auto& p : c.points) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"%s\"/>\n", x(p.cost),
                    y(p.accuracy), col);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"10\" fill=\"%s\">", W - R + 8,
                  T + 14.0 * static_cast<double>(i), col);
    os << buf << esc(c.method + " " + c.object + "/" + c.index) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace axia
