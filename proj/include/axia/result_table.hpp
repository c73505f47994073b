#pragma once

/// The (config, object, index, repetition) -> value substrate shared by every
/// method, and its CSV + sidecar file format.
///
///   <name>.csv    header `task,config,object,index,rep,value`, one row per
///                 entry, ordered by (config, object, index, rep)
///   <name>.space  `axia-table 1`, then `task`, `repetitions`, `object` and
///                 `index` lines, then an `axia-space 1` block

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "axia/catalog.hpp"
#include "axia/ec_space.hpp"
#include "axia/errors.hpp"

namespace axia {

class ResultTable {
 public:
  ResultTable() = default;

  ResultTable(int task, EcSpace space, std::vector<std::string> objects, std::vector<std::string> indexes,
              std::size_t repetitions)
      : task_(task),
        space_(std::move(space)),
        objects_(std::move(objects)),
        indexes_(std::move(indexes)),
        reps_(repetitions) {
    if (objects_.empty() || indexes_.empty()) throw std::invalid_argument("table needs objects and indexes");
    if (reps_ < 1) throw std::invalid_argument("table needs at least one repetition");
    values_.assign(space_.size() * objects_.size() * indexes_.size() * reps_, 0.0);
    present_.assign(values_.size(), 0);
  }

  /// Empty table shaped after a catalog task.
  static ResultTable for_task(int task) {
    const auto& info = task_info(task);
    return ResultTable(task, task_space(task), info.objects, info.indexes, info.repetitions);
  }

  int task() const noexcept { return task_; }
  const EcSpace& space() const noexcept { return space_; }
  std::size_t configs() const noexcept { return space_.size(); }
  const std::vector<std::string>& objects() const noexcept { return objects_; }
  const std::vector<std::string>& indexes() const noexcept { return indexes_; }
  std::size_t repetitions() const noexcept { return reps_; }

  std::size_t object_id(std::string_view name) const { return find(objects_, name, "object"); }
  std::size_t index_id(std::string_view name) const { return find(indexes_, name, "index"); }

  void set(std::size_t config, std::size_t object, std::size_t index, std::size_t rep, double value) {
    const std::size_t k = slot(config, object, index, rep);
    values_[k] = value;
    present_[k] = 1;
  }

  bool has(std::size_t config, std::size_t object, std::size_t index, std::size_t rep) const {
    return present_[slot(config, object, index, rep)] != 0;
  }

  double get(std::size_t config, std::size_t object, std::size_t index, std::size_t rep) const {
    const std::size_t k = slot(config, object, index, rep);
    if (!present_[k]) throw DataError("missing entry for configuration " + std::to_string(config));
    return values_[k];
  }

  /// Mean over the first `reps` repetitions (all when 0), summed in repetition order.
  double config_value(std::size_t config, std::size_t object, std::size_t index, std::size_t reps = 0) const {
    if (reps == 0) reps = reps_;
    if (reps > reps_) throw UsageError("requested repetitions exceed those stored");
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const std::size_t k = slot(config, object, index, r);
      if (!present_[k]) continue;
      sum += values_[k];
      ++n;
    }
    if (n == 0) throw DataError("no values for configuration " + std::to_string(config));
    return sum / static_cast<double>(n);
  }

  bool config_present(std::size_t config, std::size_t object, std::size_t index) const {
    for (std::size_t r = 0; r < reps_; ++r)
      if (present_[slot(config, object, index, r)]) return true;
    return false;
  }

  std::size_t missing() const noexcept {
    std::size_t m = 0;
    for (auto p : present_) m += p == 0;
    return m;
  }

  bool complete() const noexcept { return missing() == 0; }

  void require_complete() const {
    if (!complete()) throw DataError("table is sparse (" + std::to_string(missing()) + " missing entries)");
  }

 private:
  static std::size_t find(const std::vector<std::string>& names, std::string_view name, const char* what) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    throw UsageError(std::string("unknown ") + what + " '" + std::string(name) + "'");
  }

  std::size_t slot(std::size_t config, std::size_t object, std::size_t index, std::size_t rep) const {
    if (config >= configs() || object >= objects_.size() || index >= indexes_.size() || rep >= reps_)
      throw std::out_of_range("table coordinate out of range");
    return ((config * objects_.size() + object) * indexes_.size() + index) * reps_ + rep;
  }

  int task_ = 0;
  EcSpace space_;
  std::vector<std::string> objects_;
  std::vector<std::string> indexes_;
  std::size_t reps_ = 1;
  std::vector<double> values_;
  std::vector<std::uint8_t> present_;
};

// ---------------------------------------------------------------------------
// Files

inline constexpr std::string_view kCsvHeader = "task,config,object,index,rep,value";

inline std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".space");
  return p;
}

inline std::string table_sidecar_text(const ResultTable& t) {
  std::ostringstream os;
  os << "axia-table 1\n";
  os << "task " << t.task() << '\n';
  os << "repetitions " << t.repetitions() << '\n';
  for (const auto& o : t.objects()) os << "object " << o << '\n';
  for (const auto& i : t.indexes()) os << "index " << i << '\n';
  os << save_space_text(t.space().factors());
  return os.str();
}

inline std::string table_csv_text(const ResultTable& t) {
  std::string out(kCsvHeader);
  out += '\n';
  const std::string task = std::to_string(t.task());
  for (std::size_t c = 0; c < t.configs(); ++c)
    for (std::size_t o = 0; o < t.objects().size(); ++o)
      for (std::size_t i = 0; i < t.indexes().size(); ++i)
        for (std::size_t r = 0; r < t.repetitions(); ++r) {
          if (!t.has(c, o, i, r)) continue;
          out += task;
          out += ',';
          out += std::to_string(c);
          out += ',';
          out += t.objects()[o];
          out += ',';
          out += t.indexes()[i];
          out += ',';
          out += std::to_string(r);
          out += ',';
          out += format_double(t.get(c, o, i, r));
          out += '\n';
        }
  return out;
}

/// Writes `csv` and its sidecar; both are written to temporaries and renamed.
inline void save_result_table(const ResultTable& t, const std::filesystem::path& csv) {
  if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    auto tmp = p;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw DataError("cannot write " + p.string());
      out << text;
    }
    std::filesystem::rename(tmp, p);
  };
  write(sidecar_path(csv), table_sidecar_text(t));
  write(csv, table_csv_text(t));
}

struct TableHeader {
  int task = 0;
  std::size_t repetitions = 0;
  std::vector<std::string> objects;
  std::vector<std::string> indexes;
  SpaceDefinition space;
};

inline TableHeader parse_table_sidecar(std::istream& is) {
  TableHeader h;
  std::string line;
  if (!std::getline(is, line) || line != "axia-table 1") throw DataError("expected 'axia-table 1' header");
  std::ostringstream rest;
  bool in_space = false;
  while (std::getline(is, line)) {
    if (in_space) {
      rest << line << '\n';
      continue;
    }
    if (line.empty()) continue;
    const auto sp = line.find(' ');
    const std::string key = line.substr(0, sp);
    const std::string val = sp == std::string::npos ? "" : line.substr(sp + 1);
    if (key == "task") {
      h.task = std::stoi(val);
    } else if (key == "repetitions") {
      h.repetitions = static_cast<std::size_t>(std::stoul(val));
    } else if (key == "object") {
      h.objects.push_back(val);
    } else if (key == "index") {
      h.indexes.push_back(val);
    } else if (key == "axia-space") {
      rest << line << '\n';
      in_space = true;
    } else {
      throw DataError("unknown sidecar keyword '" + key + "'");
    }
  }
  if (!in_space) throw DataError("sidecar has no space block");
  if (h.repetitions < 1) throw DataError("sidecar declares no repetitions");
  if (h.objects.empty() || h.indexes.empty()) throw DataError("sidecar declares no objects or indexes");
  h.space = parse_space_text(rest.str());
  return h;
}

/// Space for a table header: catalog tasks must match their declared shape
/// (and regain their constraint); other task ids use the sidecar factors as is.
inline EcSpace space_for_header(const TableHeader& h) {
  if (!is_known_task(h.task)) return EcSpace(h.space.factors);
  EcSpace expected = task_space(h.task);
  const auto& got = h.space.factors;
  bool same = got.size() == expected.dimension();
  for (std::size_t i = 0; same && i < got.size(); ++i)
    same = got[i].name == expected.factor(i).name && got[i].values.size() == expected.factor(i).size();
  if (!same) throw DataError("space shape does not match task " + std::to_string(h.task) + " (expected " +
                             std::to_string(expected.size()) + " configurations)");
  if (!expected.constrained()) return EcSpace(h.space.factors);
  return expected;
}

struct LoadOptions {
  bool allow_sparse = false;
};

inline ResultTable load_result_table(const std::filesystem::path& csv, const LoadOptions& opt = {}) {
  const auto side = sidecar_path(csv);
  std::ifstream sin(side);
  if (!sin) throw DataError("missing sidecar " + side.string());
  const TableHeader h = parse_table_sidecar(sin);
  ResultTable t(h.task, space_for_header(h), h.objects, h.indexes, h.repetitions);

  std::ifstream in(csv, std::ios::binary);
  if (!in) throw DataError("cannot open " + csv.string());
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw DataError("CSV header must be exactly '" + std::string(kCsvHeader) + "'");
  std::size_t lineno = 1;
  std::vector<std::string> cells;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    cells.clear();
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    const std::string where = csv.string() + ":" + std::to_string(lineno);
    if (cells.size() != 6) throw DataError(where + ": expected 6 fields");
    auto integer = [&](const std::string& s) -> std::size_t {
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw DataError(where + ": not a non-negative integer: '" + s + "'");
      return static_cast<std::size_t>(std::stoull(s));
    };
    if (static_cast<int>(integer(cells[0])) != h.task) throw DataError(where + ": task id does not match sidecar");
    const std::size_t config = integer(cells[1]);
    if (config >= t.configs()) throw DataError(where + ": configuration ordinal out of range");
    std::size_t object = 0, index = 0;
    try {
      object = t.object_id(cells[2]);
      index = t.index_id(cells[3]);
    } catch (const UsageError& e) {
      throw DataError(where + ": " + e.what());
    }
    const std::size_t rep = integer(cells[4]);
    if (rep >= t.repetitions()) throw DataError(where + ": repetition index out of range");
    const double value = detail::parse_double_strict(cells[5]);
    if (!std::isfinite(value)) throw DataError(where + ": non-finite value");
    if (t.has(config, object, index, rep)) throw DataError(where + ": duplicate entry");
    t.set(config, object, index, rep, value);
  }
  if (!opt.allow_sparse) t.require_complete();
  return t;
}

}  // namespace axia
