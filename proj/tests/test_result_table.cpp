#include <gtest/gtest.h>

#include <cmath>

#include "axia/meta.hpp"
#include "axia/result_table.hpp"
#include "axia/synth.hpp"
#include "test_util.hpp"

using namespace axia;
using axia::testing::scratch_dir;
using axia::testing::slurp;
using axia::testing::spit;

namespace {

ResultTable llm_table() {
  ResultTable t = ResultTable::for_task(8);
  Rng rng(8);
  for (std::size_t c = 0; c < t.configs(); ++c)
    for (std::size_t o = 0; o < 3; ++o)
      for (std::size_t r = 0; r < 3; ++r) t.set(c, o, 0, r, rng.uniform01());
  return t;
}

std::string replace_line(const std::string& text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  EXPECT_NE(at, std::string::npos);
  std::string out = text;
  out.replace(at, from.size(), to);
  return out;
}

}  // namespace

TEST(Ingest, Task8TableAccepted) {
  const auto dir = scratch_dir("t8");
  const auto t = llm_table();
  save_result_table(t, dir / "llm.csv");
  const auto back = load_result_table(dir / "llm.csv");
  EXPECT_EQ(back.task(), 8);
  EXPECT_EQ(back.configs(), 3072u);
  EXPECT_EQ(back.objects().size(), 3u);
  EXPECT_EQ(back.repetitions(), 3u);
  std::size_t rows = 0;
  for (char ch : slurp(dir / "llm.csv")) rows += ch == '\n';
  EXPECT_EQ(rows, 1 + 3072u * 3 * 3);
}

TEST(Ingest, RoundTripIsBitExact) {
  const auto dir = scratch_dir("rt");
  ResultTable t = ResultTable::for_task(7);
  Rng rng(1);
  for (std::size_t c = 0; c < t.configs(); ++c)
    for (std::size_t o = 0; o < 2; ++o)
      for (std::size_t r = 0; r < 3; ++r) t.set(c, o, 0, r, std::exp(20 * rng.uniform01()) * (rng.bernoulli(0.5) ? 1 : -1));
  save_result_table(t, dir / "a.csv");
  const auto back = load_result_table(dir / "a.csv");
  for (std::size_t c = 0; c < t.configs(); ++c)
    for (std::size_t o = 0; o < 2; ++o)
      for (std::size_t r = 0; r < 3; ++r) ASSERT_EQ(back.get(c, o, 0, r), t.get(c, o, 0, r));
  save_result_table(back, dir / "b.csv");
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  EXPECT_EQ(slurp(dir / "a.space"), slurp(dir / "b.space"));
}

TEST(Ingest, RejectsRepetitionOutOfRange) {
  const auto dir = scratch_dir("rep");
  save_result_table(llm_table(), dir / "t.csv");
  const auto text = slurp(dir / "t.csv");
  spit(dir / "t.csv", replace_line(text, "8,0,gpt-4o-mini,accuracy,2,", "8,0,gpt-4o-mini,accuracy,3,"));
  EXPECT_THROW(load_result_table(dir / "t.csv"), DataError);
}

TEST(Ingest, RejectsMissingPairUnlessSparse) {
  const auto dir = scratch_dir("sparse");
  ResultTable t = llm_table();
  save_result_table(t, dir / "t.csv");
  std::string text = slurp(dir / "t.csv");
  for (int r = 0; r < 3; ++r) text = replace_line(text, "8,5,dschat,accuracy," + std::to_string(r) + ",", "#");
  // drop the three mangled lines
  std::string kept;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);)
    if (line.empty() || line[0] != '#') kept += line + "\n";
  spit(dir / "t.csv", kept);
  EXPECT_THROW(load_result_table(dir / "t.csv"), DataError);
  const auto sparse = load_result_table(dir / "t.csv", {true});
  EXPECT_EQ(sparse.missing(), 3u);
  EXPECT_FALSE(sparse.config_present(5, 1, 0));
  EXPECT_THROW(ground_truth(sparse, 1, 0), DataError);
}

TEST(Ingest, RejectsDuplicatesAndNonFinite) {
  const auto dir = scratch_dir("dup");
  save_result_table(llm_table(), dir / "t.csv");
  const auto text = slurp(dir / "t.csv");
  spit(dir / "d.csv", text + "8,0,gpt-4o-mini,accuracy,0,0.5\n");
  std::filesystem::copy_file(dir / "t.space", dir / "d.space");
  EXPECT_THROW(load_result_table(dir / "d.csv"), DataError);

  const auto first = text.find('\n', text.find('\n') + 1);
  std::string nan = text.substr(0, text.find('\n') + 1) + "8,0,gpt-4o-mini,accuracy,0,nan" + text.substr(first);
  spit(dir / "n.csv", nan);
  std::filesystem::copy_file(dir / "t.space", dir / "n.space");
  EXPECT_THROW(load_result_table(dir / "n.csv"), DataError);
}

TEST(Ingest, RejectsSchemaViolations) {
  const auto dir = scratch_dir("schema");
  save_result_table(llm_table(), dir / "t.csv");
  const auto text = slurp(dir / "t.csv");
  spit(dir / "t.csv", replace_line(text, "task,config,object,index,rep,value", "task,cfg,object,index,rep,value"));
  EXPECT_THROW(load_result_table(dir / "t.csv"), DataError);
  spit(dir / "t.csv", text + "8,3072,gpt-4o-mini,accuracy,0,1\n");
  EXPECT_THROW(load_result_table(dir / "t.csv"), DataError);
  spit(dir / "t.csv", text + "8,0,claude,accuracy,0,1\n");
  EXPECT_THROW(load_result_table(dir / "t.csv"), DataError);
  spit(dir / "t.csv", text);
  std::filesystem::remove(dir / "t.space");
  EXPECT_THROW(load_result_table(dir / "t.csv"), DataError);
}

TEST(Ingest, RejectsShapeMismatch) {
  const auto dir = scratch_dir("shape");
  save_result_table(llm_table(), dir / "t.csv");
  const auto side = slurp(dir / "t.space");
  spit(dir / "t.space", replace_line(side, "value 7\n", ""));
  EXPECT_THROW(load_result_table(dir / "t.csv"), DataError);
}

TEST(Synth, Task5Shape) {
  const auto t = synth_result_table(5, 0, 1);
  EXPECT_EQ(t.configs(), 1440u);
  EXPECT_EQ(t.objects().size(), 4u);
  EXPECT_EQ(t.indexes().size(), 2u);
  EXPECT_EQ(t.repetitions(), 1u);
  EXPECT_TRUE(t.complete());
}

TEST(Synth, ReSynthesisIsByteIdentical) {
  const auto dir = scratch_dir("resynth");
  for (int task : {4, 5, 6}) {
    save_result_table(synth_result_table(task, 37, 1), dir / "a.csv");
    save_result_table(synth_result_table(task, 37, 2), dir / "b.csv");
    EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv")) << "task " << task;
  }
}

TEST(Synth, Task1ShapeFromCache) {
  const auto t = load_task_table(1, 0, axia::testing::table_cache());
  EXPECT_EQ(t.configs(), 2000u);
  EXPECT_EQ(t.objects().size(), 2u);
  EXPECT_EQ(t.indexes().size(), 2u);
  EXPECT_EQ(t.repetitions(), 1u);
  EXPECT_TRUE(t.complete());
}

TEST(Synth, RepetitionsPerTask) {
  for (int task : {1, 4, 5}) EXPECT_EQ(task_info(task).repetitions, 1u);
  for (int task : {2, 3, 6}) EXPECT_EQ(task_info(task).repetitions, 3u);
  EXPECT_THROW(synth_result_table(7, 0), UsageError);
}

TEST(Synth, CacheDirResolution) {
  EXPECT_EQ(cache_dir(std::string("/x/y")), std::filesystem::path("/x/y"));
  ::setenv("AXIA_CACHE_DIR", "/from/env", 1);
  EXPECT_EQ(cache_dir(std::nullopt), std::filesystem::path("/from/env"));
  ::unsetenv("AXIA_CACHE_DIR");
  EXPECT_EQ(table_path("/c", 3, 42), std::filesystem::path("/c/task3-seed42.csv"));
}
