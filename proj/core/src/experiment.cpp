#include "docrep/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "docrep/bow.hpp"
#include "docrep/corpus.hpp"
#include "docrep/embed.hpp"
#include "docrep/forest.hpp"
#include "docrep/metrics.hpp"
#include "docrep/netrep.hpp"
#include "docrep/parallel.hpp"
#include "docrep/pca.hpp"
#include "docrep/preprocess.hpp"
#include "docrep/ranking.hpp"
#include "docrep/rng.hpp"

namespace docrep {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

StageError::StageError(std::string stage, const std::string& cause)
    : Error("[" + stage + "] " + cause), stage_(std::move(stage)) {}

// ---------------------------------------------------------------------------
// Featurizer

struct Featurizer::State {
  Vocabulary vocab;
  std::optional<PcaModel> pca;
  WordEmbeddings words;
  DocEmbeddings docs;
  std::unordered_map<std::string, std::size_t> doc_rows;
};

Featurizer::Featurizer(ModelConfig model, std::uint64_t seed, std::size_t jobs)
    : model_(std::move(model)), seed_(seed), jobs_(std::max<std::size_t>(1, jobs)) {}
Featurizer::~Featurizer() = default;
Featurizer::Featurizer(Featurizer&&) noexcept = default;
Featurizer& Featurizer::operator=(Featurizer&&) noexcept = default;

namespace {

FeatureMatrix bow_counts(const ModelConfig& m, std::span<const ProcessedDocument> docs, const Vocabulary& vocab) {
  return m.family == ModelFamily::BowTf ? tf_matrix(docs, vocab) : tfidf_matrix(docs, vocab);
}

std::vector<std::string> dim_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("d" + std::to_string(i));
  return out;
}

std::vector<std::string> ids_of(std::span<const ProcessedDocument> docs) {
  std::vector<std::string> ids;
  for (const auto& d : docs) ids.push_back(d.id);
  return ids;
}

}  // namespace

void Featurizer::fit(std::span<const ProcessedDocument> train, std::span<const ProcessedDocument> unlabeled) {
  if (train.empty()) throw InputError("cannot fit a representation on zero documents");
  auto st = std::make_unique<State>();
  switch (model_.family) {
    case ModelFamily::BowTf:
    case ModelFamily::BowTfidf: {
      st->vocab = build_vocabulary(train, model_.min_df);
      if (model_.variance_target > 0.0) st->pca = pca_fit(bow_counts(model_, train, st->vocab), model_.variance_target);
      break;
    }
    case ModelFamily::Word2vec: {
      auto p = EmbeddingParams::word2vec(model_.size);
      p.seed = seed_;
      if (model_.epochs) p.epochs = *model_.epochs;
      st->words = train_word2vec(train, p);
      break;
    }
    case ModelFamily::Doc2vec: {
      auto p = EmbeddingParams::doc2vec(model_.size);
      p.seed = seed_;
      if (model_.epochs) p.epochs = *model_.epochs;
      std::vector<ProcessedDocument> corpus(train.begin(), train.end());
      if (model_.train_on_all_text) corpus.insert(corpus.end(), unlabeled.begin(), unlabeled.end());
      st->docs = train_doc2vec(corpus, p);
      for (std::size_t i = 0; i < st->docs.doc_ids.size(); ++i) st->doc_rows[st->docs.doc_ids[i]] = i;
      break;
    }
    case ModelFamily::Gow: break;
  }
  state_ = std::move(st);
}

FeatureMatrix Featurizer::transform(std::span<const ProcessedDocument> docs) const {
  if (!state_) throw InputError("featurizer used before fit");
  const auto& st = *state_;
  switch (model_.family) {
    case ModelFamily::BowTf:
    case ModelFamily::BowTfidf: {
      auto m = bow_counts(model_, docs, st.vocab);
      return st.pca ? pca_transform(*st.pca, m) : m;
    }
    case ModelFamily::Word2vec: {
      FeatureMatrix m(ids_of(docs), dim_names(st.words.size));
      for (std::size_t r = 0; r < docs.size(); ++r) {
        const auto v = doc_vector_average(st.words, docs[r]);
        std::copy(v.begin(), v.end(), m.row(r).begin());
      }
      return m;
    }
    case ModelFamily::Doc2vec: {
      FeatureMatrix m(ids_of(docs), dim_names(st.docs.size));
      parallel_for(docs.size(), jobs_, [&](std::size_t r) {
        if (auto it = st.doc_rows.find(docs[r].id); it != st.doc_rows.end()) {
          const auto v = st.docs.vector(it->second);
          std::copy(v.begin(), v.end(), m.row(r).begin());
        } else {
          const auto v = infer_doc_vector(st.docs, docs[r], st.docs.params.epochs);
          std::copy(v.begin(), v.end(), m.row(r).begin());
        }
      });
      return m;
    }
    case ModelFamily::Gow: return gow_matrix(docs, model_.scheme, jobs_);
  }
  throw InputError("unknown model family");
}

std::string Featurizer::state_json() const {
  if (!state_) return "null";
  const auto& st = *state_;
  std::ostringstream out;
  out << "{\"model\":\"" << model_.name << "\"";
  switch (model_.family) {
    case ModelFamily::BowTf:
    case ModelFamily::BowTfidf:
      out << ",\"vocabulary\":" << to_json(st.vocab);
      if (st.pca) out << ",\"pca\":" << to_json(*st.pca);
      break;
    case ModelFamily::Word2vec: {
      std::ostringstream csv;
      write_csv(csv, to_feature_matrix(st.words));
      out << ",\"word_vectors\":" << json(csv.str()).dump();
      break;
    }
    case ModelFamily::Doc2vec: {
      std::ostringstream docs, words;
      write_csv(docs, to_feature_matrix(st.docs));
      write_csv(words, to_feature_matrix(st.docs.words));
      out << ",\"params\":" << params_json(st.docs.params) << ",\"doc_vectors\":" << json(docs.str()).dump()
          << ",\"word_vectors\":" << json(words.str()).dump();
      break;
    }
    case ModelFamily::Gow: break;
  }
  out << "}";
  return out.str();
}

// ---------------------------------------------------------------------------
// Artifacts

const StageRecord* RunManifest::stage(const std::string& name) const {
  for (const auto& s : stages)
    if (s.name == name) return &s;
  return nullptr;
}

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names = {"ingest", "featurize", "train", "evaluate", "rank", "report"};
  return names;
}

std::string to_json(const RunManifest& m) {
  ordered_json j;
  j["config_hash"] = m.config_hash;
  j["root"] = m.root.string();
  auto& stages = j["stages"] = ordered_json::array();
  for (const auto& s : m.stages) {
    stages.push_back({{"name", s.name}, {"seconds", s.seconds}, {"artifacts", s.artifacts}});
  }
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  const auto j = json::parse(text);
  RunManifest m;
  m.config_hash = j.at("config_hash").get<std::string>();
  m.root = j.at("root").get<std::string>();
  for (const auto& s : j.at("stages")) {
    m.stages.push_back({s.at("name").get<std::string>(), s.at("seconds").get<double>(),
                        s.at("artifacts").get<std::vector<std::string>>()});
  }
  return m;
}

std::string processed_json(std::span<const ProcessedDocument> docs, const std::string& config_hash) {
  ordered_json j;
  j["config_hash"] = config_hash;
  auto& arr = j["documents"] = ordered_json::array();
  for (const auto& d : docs) arr.push_back({{"id", d.id}, {"label", d.label}, {"sentences", d.sentences}});
  return j.dump() + "\n";
}

std::vector<ProcessedDocument> parse_processed_json(const std::string& text) {
  const auto j = json::parse(text);
  std::vector<ProcessedDocument> docs;
  for (const auto& d : j.at("documents")) {
    docs.push_back({d.at("id").get<std::string>(), d.at("label").get<std::string>(),
                    d.at("sentences").get<std::vector<Sentence>>()});
  }
  return docs;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string() + " (has the previous stage run?)");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed for " + path.string());
}

/// Puts "config_hash" first in a JSON object rendered by one of the modules.
std::string with_hash(const std::string& object_json, const std::string& hash) {
  if (object_json.empty() || object_json.front() != '{') throw InputError("expected a JSON object");
  const bool pretty = object_json.size() > 1 && object_json[1] == '\n';
  std::string field = "\"config_hash\":" + json(hash).dump();
  std::string out = object_json;
  out.insert(1, pretty ? "\n  \"config_hash\": " + json(hash).dump() + "," : field + ",");
  if (out.back() != '\n') out.push_back('\n');
  return out;
}

struct Pair {
  const CorpusConfig* corpus;
  const ModelConfig* model;
};

std::vector<Pair> pairs_of(const ExperimentConfig& cfg) {
  std::vector<Pair> out;
  for (const auto& c : cfg.corpora)
    for (const auto& m : cfg.models) out.push_back({&c, &m});
  return out;
}

std::string corpus_dir(const CorpusConfig& c) { return "corpora/" + c.name; }
std::string feature_dir(const Pair& p) { return "features/" + p.corpus->name + "/" + p.model->name; }
std::string model_dir(const Pair& p) { return "models/" + p.corpus->name + "/" + p.model->name; }
std::string report_base(const Pair& p) { return "reports/" + p.corpus->name + "/" + p.model->name; }

std::uint64_t pair_seed(const ExperimentConfig& cfg, const Pair& p, std::uint64_t salt) {
  return derive_seed(derive_seed(cfg.seed, hash_string(p.corpus->name + "\n" + p.model->name)), salt);
}

/// Scheduling: independent pipelines run concurrently unless deterministic
/// mode asks for one at a time, in which case workers go to the inner loops.
std::size_t outer_jobs(const ExperimentConfig& cfg) { return cfg.deterministic ? 1 : cfg.jobs; }
std::size_t inner_jobs(const ExperimentConfig& cfg) { return cfg.deterministic ? cfg.jobs : 1; }

class ArtifactLog {
public:
  void add(std::string path) {
    std::lock_guard lock(mutex_);
    paths_.push_back(std::move(path));
  }
  std::vector<std::string> take() {
    std::sort(paths_.begin(), paths_.end());
    return std::move(paths_);
  }

private:
  std::mutex mutex_;
  std::vector<std::string> paths_;
};

struct Context {
  const ExperimentConfig& cfg;
  const fs::path& root;
  const std::string& hash;
  ArtifactLog& log;

  void write(const std::string& rel, const std::string& text) const {
    write_file(root / rel, text);
    log.add(rel);
  }
  void write(const std::string& rel, const FeatureMatrix& m) const {
    fs::create_directories((root / rel).parent_path());
    write_csv(root / rel, m, "config " + hash);
    log.add(rel);
  }
  std::string read(const std::string& rel) const { return read_file(root / rel); }
};

/// Runs fn on every (corpus, model) pair, tagging failures with the pair.
template <typename Fn>
void for_each_pair(const Context& ctx, Fn&& fn) {
  const auto pairs = pairs_of(ctx.cfg);
  parallel_for(pairs.size(), outer_jobs(ctx.cfg), [&](std::size_t i) {
    try {
      fn(pairs[i]);
    } catch (const std::exception& e) {
      throw Error(pairs[i].corpus->name + "/" + pairs[i].model->name + ": " + e.what());
    }
  });
}

void stage_ingest(const Context& ctx) {
  const auto stoplist = resolve_stoplist(ctx.cfg.preprocess);
  for (const auto& c : ctx.cfg.corpora) {
    try {
      const auto corpus = load_corpus(c.path, c.format);
      std::vector<ProcessedDocument> processed(corpus.size());
      parallel_for(corpus.size(), ctx.cfg.jobs, [&](std::size_t i) {
        processed[i] = preprocess_document(corpus.documents()[i], ctx.cfg.preprocess, stoplist);
      });
      SplitSpec spec;
      if (c.split_mode == SplitMode::Predefined) {
        spec = predefined_split_spec(corpus);
      } else {
        spec.train_fraction = c.train_fraction;
        spec.seed = derive_seed(ctx.cfg.seed, hash_string("split\n" + c.name));
      }
      const auto split = stratified_split(corpus, spec);
      const auto dir = corpus_dir(c);
      ctx.write(dir + "/processed.json", processed_json(processed, ctx.hash));
      ctx.write(dir + "/stats.json", with_hash(to_json(corpus_stats(corpus, processed)), ctx.hash));
      ctx.write(dir + "/split.json", with_hash(split_manifest_json(corpus, split), ctx.hash));
    } catch (const std::exception& e) {
      throw Error(c.name + ": " + e.what());
    }
  }
}

struct SplitDocs {
  std::vector<ProcessedDocument> train;
  std::vector<ProcessedDocument> test;
  std::unordered_map<std::string, std::string> labels;
  /// Sorted labels of the whole corpus.
  std::vector<std::string> all_labels;
};

SplitDocs load_split_docs(const Context& ctx, const CorpusConfig& c) {
  const auto docs = parse_processed_json(ctx.read(corpus_dir(c) + "/processed.json"));
  const auto split = json::parse(ctx.read(corpus_dir(c) + "/split.json"));
  SplitDocs out;
  std::unordered_map<std::string, const ProcessedDocument*> by_id;
  for (const auto& d : docs) {
    by_id[d.id] = &d;
    out.labels[d.id] = d.label;
    out.all_labels.push_back(d.label);
  }
  std::sort(out.all_labels.begin(), out.all_labels.end());
  out.all_labels.erase(std::unique(out.all_labels.begin(), out.all_labels.end()), out.all_labels.end());
  auto take = [&](const char* key, std::vector<ProcessedDocument>& dst) {
    for (const auto& id : split.at(key)) {
      auto it = by_id.find(id.get<std::string>());
      if (it == by_id.end()) throw InputError("split lists unknown document '" + id.get<std::string>() + "'");
      dst.push_back(*it->second);
    }
  };
  take("train", out.train);
  take("test", out.test);
  return out;
}

std::vector<std::string> labels_for(const SplitDocs& docs, const FeatureMatrix& m) {
  std::vector<std::string> y;
  for (const auto& id : m.doc_ids()) {
    auto it = docs.labels.find(id);
    if (it == docs.labels.end()) throw InputError("feature row for unknown document '" + id + "'");
    y.push_back(it->second);
  }
  return y;
}

void stage_featurize(const Context& ctx) {
  for_each_pair(ctx, [&](const Pair& p) {
    const auto docs = load_split_docs(ctx, *p.corpus);
    Featurizer f(*p.model, pair_seed(ctx.cfg, p, 1), inner_jobs(ctx.cfg));
    f.fit(docs.train, p.model->train_on_all_text ? std::span<const ProcessedDocument>(docs.test)
                                                 : std::span<const ProcessedDocument>());
    const auto train = f.transform(docs.train);
    const auto test = f.transform(docs.test);
    train.check_finite();
    test.check_finite();
    const auto dir = feature_dir(p);
    ctx.write(dir + "/train.csv", train);
    ctx.write(dir + "/test.csv", test);
    ordered_json fitted;
    fitted["config_hash"] = ctx.hash;
    fitted["model"] = p.model->name;
    fitted["family"] = to_string(p.model->family);
    fitted["n_features"] = train.cols();
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_string(f.state_json())));
    fitted["state_hash"] = buf;
    ctx.write(dir + "/fitted.json", fitted.dump(2) + "\n");
  });
}

void stage_train(const Context& ctx) {
  for_each_pair(ctx, [&](const Pair& p) {
    const auto docs = load_split_docs(ctx, *p.corpus);
    const auto x = read_csv(ctx.root / (feature_dir(p) + "/train.csv"));
    const auto y = labels_for(docs, x);
    auto params = ctx.cfg.forest;
    params.seed = pair_seed(ctx.cfg, p, 2);
    params.jobs = inner_jobs(ctx.cfg);
    ordered_json tuning;
    tuning["config_hash"] = ctx.hash;
    if (ctx.cfg.tune_mtry && !params.mtry) {
      const auto t = tune_mtry(x, y, params, ctx.cfg.tuning);
      params.mtry = t.best;
      tuning["best"] = t.best;
      auto& tried = tuning["tried"] = ordered_json::array();
      for (const auto& [m, err] : t.tried) tried.push_back({{"mtry", m}, {"oob_error", err}});
    }
    const auto model = train_forest(x, y, params);
    tuning["mtry"] = model.mtry;
    tuning["oob_error"] = oob_error(model);
    const auto dir = model_dir(p);
    ctx.write(dir + "/forest.json", with_hash(to_json(model), ctx.hash));
    ctx.write(dir + "/training.json", tuning.dump(2) + "\n");
  });
}

void stage_evaluate(const Context& ctx) {
  for_each_pair(ctx, [&](const Pair& p) {
    const auto docs = load_split_docs(ctx, *p.corpus);
    const auto x = read_csv(ctx.root / (feature_dir(p) + "/test.csv"));
    const auto model = forest_from_json(ctx.read(model_dir(p) + "/forest.json"));
    const auto y_true = labels_for(docs, x);
    const auto y_pred = predict(model, x);
    // Class columns follow the corpus labels; a class never seen in training scores 0.
    const auto proba = predict_proba(model, x);
    std::vector<std::vector<double>> dist(x.rows(), std::vector<double>(docs.all_labels.size(), 0.0));
    for (std::size_t c = 0; c < model.labels.size(); ++c) {
      const auto at = std::lower_bound(docs.all_labels.begin(), docs.all_labels.end(), model.labels[c]);
      const auto k = static_cast<std::size_t>(at - docs.all_labels.begin());
      for (std::size_t r = 0; r < x.rows(); ++r) dist[r][k] = proba[r][c];
    }
    const auto report = evaluate(p.model->name, p.corpus->name, y_true, y_pred, dist, docs.all_labels);
    ctx.write(report_base(p) + ".json", to_json(report, ctx.hash));
  });
}

std::vector<EvaluationReport> load_reports(const Context& ctx) {
  std::vector<EvaluationReport> reports;
  for (const auto& p : pairs_of(ctx.cfg)) reports.push_back(report_from_json(ctx.read(report_base(p) + ".json")));
  return reports;
}

void stage_rank(const Context& ctx) {
  const auto reports = load_reports(ctx);
  for (auto metric : all_rank_metrics()) {
    ctx.write("ranks/" + to_string(metric) + ".json", to_json(rank_models(reports, metric), ctx.hash));
  }
}

RankTable rank_table_from_json(const std::string& text) {
  const auto j = json::parse(text);
  RankTable t;
  t.metric = parse_rank_metric(j.at("metric").get<std::string>());
  t.tasks = j.at("tasks").get<std::vector<std::string>>();
  t.models = j.at("models").get<std::vector<std::string>>();
  for (const auto& row : j.at("rows")) {
    const auto model = row.at("model").get<std::string>();
    for (const auto& task : t.tasks) t.per_task[task][model] = row.at("ranks").at(task).get<double>();
    t.average_rank[model] = row.at("average_rank").get<double>();
  }
  return t;
}

double macro_mean(const EvaluationReport& r, RankMetric metric, bool& defined) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& s : r.per_class) {
    switch (metric) {
      case RankMetric::Precision: sum += s.precision; ++n; break;
      case RankMetric::Recall: sum += s.recall; ++n; break;
      case RankMetric::F1: sum += s.f1; ++n; break;
      case RankMetric::Auroc:
        if (s.auroc) {
          sum += *s.auroc;
          ++n;
        }
        break;
      case RankMetric::Accuracy: break;
    }
  }
  defined = n > 0;
  return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

void record(RunManifest& manifest, StageRecord rec) {
  auto it = std::find_if(manifest.stages.begin(), manifest.stages.end(),
                         [&](const StageRecord& s) { return s.name == rec.name; });
  if (it != manifest.stages.end()) {
    *it = std::move(rec);
  } else {
    manifest.stages.push_back(std::move(rec));
  }
  std::stable_sort(manifest.stages.begin(), manifest.stages.end(), [](const auto& a, const auto& b) {
    const auto& names = stage_names();
    return std::find(names.begin(), names.end(), a.name) < std::find(names.begin(), names.end(), b.name);
  });
}

}  // namespace

std::vector<std::string> emit_report(const ExperimentConfig& cfg, const RunManifest& manifest) {
  ArtifactLog log;
  const Context ctx{cfg, manifest.root, manifest.config_hash, log};
  const auto reports = load_reports(ctx);
  for (const auto& p : pairs_of(cfg)) {
    ctx.write(report_base(p) + ".csv", to_csv(report_from_json(ctx.read(report_base(p) + ".json")), ctx.hash));
  }
  for (auto metric : all_rank_metrics()) {
    const auto table = rank_table_from_json(ctx.read("ranks/" + to_string(metric) + ".json"));
    ctx.write("ranks/" + to_string(metric) + ".csv", to_csv(table, ctx.hash));
  }
  std::ostringstream plot;
  plot << "# config " << ctx.hash << "\nmodel,task,metric,value\n";
  for (const auto& r : reports) {
    const auto row = [&](const std::string& metric, double v) {
      plot << csv_field(r.model_name) << ',' << csv_field(r.task_name) << ',' << metric << ',' << format_double(v)
           << '\n';
    };
    row("accuracy", r.accuracy);
    for (auto metric : {RankMetric::Precision, RankMetric::Recall, RankMetric::F1, RankMetric::Auroc}) {
      bool defined = false;
      const double v = macro_mean(r, metric, defined);
      if (defined) row(to_string(metric) + "_macro", v);
    }
  }
  ctx.write("plot_data.csv", plot.str());
  return log.take();
}

RunManifest open_run(const ExperimentConfig& cfg) {
  RunManifest m;
  m.config_hash = config_hash(cfg);
  m.root = cfg.output / m.config_hash;
  const auto path = m.root / "manifest.json";
  if (fs::exists(path)) {
    auto existing = manifest_from_json(read_file(path));
    if (existing.config_hash == m.config_hash) m.stages = std::move(existing.stages);
  }
  return m;
}

void run_stage(const ExperimentConfig& cfg, const std::string& stage, RunManifest& manifest) {
  const auto start = std::chrono::steady_clock::now();
  ArtifactLog log;
  std::vector<std::string> artifacts;
  try {
    fs::create_directories(manifest.root);
    const Context ctx{cfg, manifest.root, manifest.config_hash, log};
    if (stage == "ingest") {
      stage_ingest(ctx);
    } else if (stage == "featurize") {
      stage_featurize(ctx);
    } else if (stage == "train") {
      stage_train(ctx);
    } else if (stage == "evaluate") {
      stage_evaluate(ctx);
    } else if (stage == "rank") {
      stage_rank(ctx);
    } else if (stage == "report") {
      artifacts = emit_report(cfg, manifest);
    } else {
      throw InputError("unknown stage '" + stage + "'");
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
  if (artifacts.empty()) artifacts = log.take();
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  record(manifest, {stage, elapsed.count(), std::move(artifacts)});
  write_file(manifest.root / "manifest.json", to_json(manifest));
}

RunManifest run_experiment(const ExperimentConfig& cfg) {
  try {
    validate(cfg);
  } catch (const std::exception& e) {
    throw StageError("config", e.what());
  }
  auto manifest = open_run(cfg);
  for (const auto& stage : stage_names()) run_stage(cfg, stage, manifest);
  return manifest;
}

}  // namespace docrep
