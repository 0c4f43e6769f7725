#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>
#include <json.hpp>

#include "docrep/corpus.hpp"
#include "docrep/error.hpp"
#include "support/synthetic.hpp"
#include "support/temp_dir.hpp"

using namespace docrep;

TEST(LoadCorpus, LabeledDirectories) {
  testutil::TempDir tmp;
  testutil::write_text(tmp / "fiction/a.txt", "once upon");
  testutil::write_text(tmp / "fiction/b.txt", "a time");
  testutil::write_text(tmp / "news/1.txt", "today");
  testutil::write_text(tmp / "news/2.txt", "yesterday");
  testutil::write_text(tmp / "news/3.txt", "tomorrow");
  const auto c = load_corpus(tmp.path(), CorpusFormat::LabeledDirs);
  EXPECT_EQ(c.size(), 5u);
  EXPECT_EQ(c.labels(), (std::vector<std::string>{"fiction", "news"}));
  EXPECT_EQ(c.documents()[0].id, "fiction/a.txt");
  EXPECT_EQ(c.documents()[0].text, "once upon");
  EXPECT_EQ(c.documents()[4].id, "news/3.txt");
}

TEST(LoadCorpus, EmptyDirectoryIsAnError) {
  testutil::TempDir tmp;
  try {
    load_corpus(tmp.path(), CorpusFormat::LabeledDirs);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("no documents found"), std::string::npos);
  }
}

TEST(LoadCorpus, JsonlSingleRecord) {
  testutil::TempDir tmp;
  testutil::write_text(tmp / "c.jsonl", R"({"id":"a","text":"x","label":"L"})" "\n");
  const auto c = load_corpus(tmp / "c.jsonl", CorpusFormat::Jsonl);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.documents()[0], (RawDocument{"a", "x", "L", ""}));
}

TEST(LoadCorpus, JsonlMissingLabelNamesTheRecord) {
  testutil::TempDir tmp;
  testutil::write_text(tmp / "c.jsonl", "{\"id\":\"a\",\"text\":\"x\",\"label\":\"L\"}\n{\"id\":\"b\",\"text\":\"y\"}\n");
  try {
    load_corpus(tmp / "c.jsonl", CorpusFormat::Jsonl);
    FAIL();
  } catch (const InputError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find(":2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'b'"), std::string::npos) << msg;
  }
}

TEST(LoadCorpus, DuplicateIdsRejected) {
  testutil::TempDir tmp;
  testutil::write_text(tmp / "c.jsonl", "{\"id\":\"a\",\"label\":\"L\"}\n{\"id\":\"a\",\"label\":\"M\"}\n");
  EXPECT_THROW(load_corpus(tmp / "c.jsonl", CorpusFormat::Jsonl), InputError);
}

TEST(LoadCorpus, MissingPath) {
  EXPECT_THROW(load_corpus("/nonexistent/corpus.jsonl", CorpusFormat::Jsonl), InputError);
}

TEST(CorpusStats, CountsStems) {
  Corpus c({{"d", "", "L", ""}});
  std::vector<ProcessedDocument> p{{"d", "L", {{"a", "b", "a"}}}};
  const auto st = corpus_stats(c, p);
  EXPECT_EQ(st.n_distinct_stems, 2u);
  EXPECT_EQ(st.total_length, 3u);
  EXPECT_DOUBLE_EQ(st.avg_len, 3.0);
}

TEST(CorpusStats, MinMaxAverage) {
  Corpus c({{"d1", "", "L", ""}, {"d2", "", "M", ""}});
  std::vector<ProcessedDocument> p{{"d1", "L", {{"a", "b"}}}, {"d2", "M", {{"a"}, {"c", "d", "e"}}}};
  const auto st = corpus_stats(c, p);
  EXPECT_EQ(st.min_len, 2u);
  EXPECT_EQ(st.max_len, 4u);
  EXPECT_DOUBLE_EQ(st.avg_len, 3.0);
  EXPECT_EQ(st.label_histogram.at("L") + st.label_histogram.at("M"), st.n_docs);
}

TEST(CorpusStats, FiveHundredDocuments) {
  const auto c = synth::labeled_corpus(synth::brown_genres());
  std::vector<ProcessedDocument> p;
  for (const auto& d : c.documents()) p.push_back({d.id, d.label, {}});
  EXPECT_EQ(corpus_stats(c, p).n_docs, 500u);
}

TEST(CorpusStats, LengthMismatch) {
  Corpus c({{"d1", "", "L", ""}});
  EXPECT_THROW(corpus_stats(c, {}), InputError);
}

TEST(StratifiedSplit, BrownTopLevelGives401) {
  const auto c = synth::labeled_corpus(synth::brown_top_level());
  const auto s = stratified_split(c, {SplitMode::Stratified, 0.8, 42, {}, {}});
  EXPECT_EQ(s.train.size(), 401u);
  EXPECT_EQ(s.test.size(), 99u);
}

TEST(StratifiedSplit, BalancedHalves) {
  std::map<std::string, std::size_t> sizes{{"x", 10}, {"y", 10}};
  const auto c = synth::labeled_corpus(sizes);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = stratified_split(c, {SplitMode::Stratified, 0.5, seed, {}, {}});
    std::size_t x_train = 0;
    for (auto i : s.train) x_train += c.documents()[i].label == "x";
    EXPECT_EQ(s.train.size(), 10u);
    EXPECT_EQ(x_train, 5u);
  }
}

TEST(StratifiedSplit, PredefinedVerbatim) {
  const auto c = synth::labeled_corpus({{"x", 3}, {"y", 3}});
  SplitSpec spec{SplitMode::Predefined, 0.8, 0, {5, 0, 2}, {1, 3, 4}};
  const auto s = stratified_split(c, spec);
  EXPECT_EQ(s.train, spec.train_indices);
  EXPECT_EQ(s.test, spec.test_indices);
}

TEST(StratifiedSplit, SingletonClassRejected) {
  const auto c = synth::labeled_corpus({{"x", 1}, {"y", 5}});
  EXPECT_THROW(stratified_split(c, {}), InputError);
}

TEST(StratifiedSplit, PartitionStratificationDeterminism) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::map<std::string, std::size_t> sizes;
    const int k = 2 + static_cast<int>(gen() % 6);
    for (int c = 0; c < k; ++c) sizes["c" + std::to_string(c)] = 2 + gen() % 40;
    const auto corpus = synth::labeled_corpus(sizes);
    const double f = 0.05 + 0.9 * static_cast<double>(gen() % 1000) / 1000.0;
    const SplitSpec spec{SplitMode::Stratified, f, gen(), {}, {}};
    const auto s = stratified_split(corpus, spec);
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    for (auto i : s.test) EXPECT_TRUE(all.insert(i).second) << "index in both sets";
    EXPECT_EQ(all.size(), corpus.size());
    for (const auto& [label, n] : sizes) {
      std::size_t in_train = 0;
      for (auto i : s.train) in_train += corpus.documents()[i].label == label;
      EXPECT_LE(std::abs(static_cast<double>(in_train) / n - f), 1.0 / n + 1e-12);
    }
    EXPECT_EQ(stratified_split(corpus, spec), s);
  }
}

TEST(StratifiedSplit, ManifestRoundTrip) {
  const auto c = synth::labeled_corpus({{"x", 5}, {"y", 5}});
  const auto s = stratified_split(c, {SplitMode::Stratified, 0.6, 3, {}, {}});
  const auto text = split_manifest_json(c, s);
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j.at("train").size(), s.train.size());
  EXPECT_EQ(parse_split_manifest(c, text), s);
}

TEST(StratifiedSplit, PredefinedFromRecords) {
  Corpus c({{"a", "", "x", "train"}, {"b", "", "y", "test"}, {"c", "", "x", "test"}});
  const auto s = stratified_split(c, predefined_split_spec(c));
  EXPECT_EQ(s.train, (std::vector<std::size_t>{0}));
  EXPECT_EQ(s.test, (std::vector<std::size_t>{1, 2}));
}
