#include "docrep/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "docrep/error.hpp"
#include "docrep/rng.hpp"

namespace docrep {

using nlohmann::json;

Corpus::Corpus(std::vector<RawDocument> documents) : documents_(std::move(documents)) {
  std::unordered_set<std::string> ids;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const auto& d = documents_[i];
    if (d.label.empty()) {
      throw InputError("document '" + d.id + "' (record " + std::to_string(i + 1) +
                       ") has an empty label");
    }
    if (!ids.insert(d.id).second) throw InputError("duplicate document id '" + d.id + "'");
    labels.insert(d.label);
  }
  labels_.assign(labels.begin(), labels.end());
}

CorpusFormat parse_corpus_format(const std::string& name) {
  if (name == "jsonl") return CorpusFormat::Jsonl;
  if (name == "labeled-dirs" || name == "dirs") return CorpusFormat::LabeledDirs;
  throw InputError("unknown corpus format '" + name + "' (expected jsonl or labeled-dirs)");
}

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Corpus load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open corpus file " + path.string());
  std::vector<RawDocument> docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": invalid JSON: " + e.what());
    }
    auto where = [&] { return path.string() + ":" + std::to_string(lineno); };
    if (!rec.is_object()) throw InputError(where() + ": record is not an object");
    if (!rec.contains("id") || !rec["id"].is_string()) {
      throw InputError(where() + ": record is missing string field 'id'");
    }
    RawDocument d;
    d.id = rec["id"].get<std::string>();
    if (!rec.contains("label") || !rec["label"].is_string()) {
      throw InputError(where() + ": record '" + d.id + "' is missing string field 'label'");
    }
    d.label = rec["label"].get<std::string>();
    if (rec.contains("text")) {
      if (!rec["text"].is_string()) throw InputError(where() + ": field 'text' is not a string");
      d.text = rec["text"].get<std::string>();
    }
    if (rec.contains("split") && rec["split"].is_string()) d.split = rec["split"].get<std::string>();
    docs.push_back(std::move(d));
  }
  if (docs.empty()) throw InputError("no documents found in " + path.string());
  return Corpus(std::move(docs));
}

Corpus load_dirs(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw InputError("not a directory: " + root.string());
  std::vector<fs::path> label_dirs;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory()) label_dirs.push_back(e.path());
  }
  std::sort(label_dirs.begin(), label_dirs.end());
  std::vector<RawDocument> docs;
  for (const auto& dir : label_dirs) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    const auto label = dir.filename().string();
    for (const auto& f : files) {
      RawDocument d;
      d.id = fs::relative(f, root).generic_string();
      d.label = label;
      d.text = read_file(f);
      docs.push_back(std::move(d));
    }
  }
  if (docs.empty()) throw InputError("no documents found in " + root.string());
  return Corpus(std::move(docs));
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  if (!std::filesystem::exists(path)) throw InputError("corpus path does not exist: " + path.string());
  return format == CorpusFormat::Jsonl ? load_jsonl(path) : load_dirs(path);
}

CorpusStats corpus_stats(const Corpus& corpus, std::span<const ProcessedDocument> processed) {
  if (processed.size() != corpus.size()) {
    throw InputError("corpus_stats: " + std::to_string(corpus.size()) + " documents but " +
                     std::to_string(processed.size()) + " preprocessed documents");
  }
  CorpusStats st;
  st.n_docs = corpus.size();
  std::unordered_set<std::string> stems;
  for (std::size_t i = 0; i < processed.size(); ++i) {
    const auto len = processed[i].length();
    st.total_length += len;
    if (i == 0 || len < st.min_len) st.min_len = len;
    if (i == 0 || len > st.max_len) st.max_len = len;
    for (const auto& s : processed[i].sentences) stems.insert(s.begin(), s.end());
    ++st.label_histogram[corpus.documents()[i].label];
  }
  st.n_distinct_stems = stems.size();
  st.avg_len = st.n_docs ? static_cast<double>(st.total_length) / st.n_docs : 0.0;
  return st;
}

std::string to_json(const CorpusStats& st) {
  json j = {{"n_docs", st.n_docs},
            {"n_distinct_stems", st.n_distinct_stems},
            {"total_length", st.total_length},
            {"min_len", st.min_len},
            {"max_len", st.max_len},
            {"avg_len", st.avg_len},
            {"label_histogram", st.label_histogram}};
  return j.dump(2);
}

std::size_t stratified_train_count(std::size_t class_count, double train_fraction) {
  if (class_count < 2) {
    throw InputError("stratified split needs at least 2 documents per class");
  }
  // The epsilon absorbs representation error in products such as 0.8 * 30.
  auto n = static_cast<std::size_t>(std::ceil(train_fraction * class_count - 1e-9));
  return std::clamp<std::size_t>(n, 1, class_count - 1);
}

Split stratified_split(const Corpus& corpus, const SplitSpec& spec) {
  Split out;
  if (spec.mode == SplitMode::Predefined) {
    for (auto i : spec.train_indices)
      if (i >= corpus.size()) throw InputError("predefined split index out of range");
    for (auto i : spec.test_indices)
      if (i >= corpus.size()) throw InputError("predefined split index out of range");
    out.train = spec.train_indices;
    out.test = spec.test_indices;
    return out;
  }
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw InputError("train fraction must lie in (0, 1)");
  }
  std::map<std::string, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    by_label[corpus.documents()[i].label].push_back(i);
  }
  Rng rng(spec.seed);
  for (auto& [label, members] : by_label) {
    if (members.size() < 2) {
      throw InputError("class '" + label + "' has a single document; cannot stratify");
    }
    const auto n_train = stratified_train_count(members.size(), spec.train_fraction);
    rng.shuffle(std::span(members));
    out.train.insert(out.train.end(), members.begin(), members.begin() + n_train);
    out.test.insert(out.test.end(), members.begin() + n_train, members.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

SplitSpec predefined_split_spec(const Corpus& corpus) {
  SplitSpec spec;
  spec.mode = SplitMode::Predefined;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& s = corpus.documents()[i].split;
    if (s == "train") {
      spec.train_indices.push_back(i);
    } else if (s == "test") {
      spec.test_indices.push_back(i);
    } else {
      throw InputError("document '" + corpus.documents()[i].id +
                       "' has no train/test split field; predefined split impossible");
    }
  }
  return spec;
}

std::string split_manifest_json(const Corpus& corpus, const Split& split) {
  json j;
  j["train"] = json::array();
  j["test"] = json::array();
  for (auto i : split.train) j["train"].push_back(corpus.documents()[i].id);
  for (auto i : split.test) j["test"].push_back(corpus.documents()[i].id);
  return j.dump(2);
}

Split parse_split_manifest(const Corpus& corpus, const std::string& text) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < corpus.size(); ++i) index.emplace(corpus.documents()[i].id, i);
  const auto j = json::parse(text);
  Split out;
  auto fill = [&](const char* key, std::vector<std::size_t>& dst) {
    if (!j.contains(key)) throw InputError(std::string("split manifest lacks '") + key + "'");
    for (const auto& id : j.at(key)) {
      auto it = index.find(id.get<std::string>());
      if (it == index.end()) throw InputError("split manifest names unknown id '" + id.get<std::string>() + "'");
      dst.push_back(it->second);
    }
  };
  fill("train", out.train);
  fill("test", out.test);
  return out;
}

}  // namespace docrep
