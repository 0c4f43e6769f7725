#include "docrep/experiment_config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "docrep/error.hpp"
#include "docrep/rng.hpp"

namespace docrep {

using nlohmann::json;

std::string to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::BowTf: return "bow-tf";
    case ModelFamily::BowTfidf: return "bow-tfidf";
    case ModelFamily::Word2vec: return "word2vec";
    case ModelFamily::Doc2vec: return "doc2vec";
    case ModelFamily::Gow: return "gow";
  }
  return "?";
}

ModelFamily parse_model_family(const std::string& name) {
  for (auto f : {ModelFamily::BowTf, ModelFamily::BowTfidf, ModelFamily::Word2vec, ModelFamily::Doc2vec,
                 ModelFamily::Gow}) {
    if (to_string(f) == name) return f;
  }
  throw InputError("unknown model family '" + name + "' (expected bow-tf, bow-tfidf, word2vec, doc2vec or gow)");
}

std::string default_model_name(const ModelConfig& m) {
  switch (m.family) {
    case ModelFamily::BowTf:
    case ModelFamily::BowTfidf: return to_string(m.family);
    case ModelFamily::Word2vec:
    case ModelFamily::Doc2vec: return to_string(m.family) + "-" + std::to_string(m.size);
    case ModelFamily::Gow: return "gow-" + to_string(m.scheme);
  }
  return "?";
}

std::vector<ModelConfig> standard_models() {
  std::vector<ModelConfig> out;
  auto add = [&](ModelFamily family, std::size_t size, GowScheme scheme) {
    ModelConfig m;
    m.family = family;
    m.size = size;
    m.scheme = scheme;
    m.name = default_model_name(m);
    out.push_back(std::move(m));
  };
  add(ModelFamily::BowTf, 100, GowScheme::Average);
  add(ModelFamily::BowTfidf, 100, GowScheme::Average);
  for (std::size_t s : {25, 50, 75, 100}) add(ModelFamily::Word2vec, s, GowScheme::Average);
  for (std::size_t s : {25, 50, 75, 100, 200, 500, 1000}) add(ModelFamily::Doc2vec, s, GowScheme::Average);
  for (auto g : {GowScheme::Average, GowScheme::Quartiles, GowScheme::Histogram}) add(ModelFamily::Gow, 100, g);
  return out;
}

namespace {

json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined: return nullptr;
    case YAML::NodeType::Sequence: {
      json arr = json::array();
      for (const auto& item : node) arr.push_back(yaml_to_json(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      json obj = json::object();
      for (const auto& kv : node) obj[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return obj;
    }
    case YAML::NodeType::Scalar: break;
  }
  const auto& s = node.Scalar();
  if (node.Tag() == "!") return s;  // quoted
  if (s == "true" || s == "True") return true;
  if (s == "false" || s == "False") return false;
  if (s == "null" || s == "~") return nullptr;
  {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size()) {
      if (v >= 0) return static_cast<std::uint64_t>(v);
      return v;
    }
  }
  {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size() && !s.empty()) return v;
  }
  return s;
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InputError(where + ": expected a mapping");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw InputError(where + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
      if (!it->is_number_unsigned()) throw InputError("expected a non-negative integer");
    } else if constexpr (std::is_same_v<T, double>) {
      if (!it->is_number()) throw InputError("expected a number");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) throw InputError("expected true or false");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) throw InputError("expected a string");
    }
    return it->get<T>();
  } catch (const std::exception& e) {
    throw InputError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
std::optional<T> get_optional(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return get<T>(obj, key, where, T{});
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.lexically_normal();
}

CorpusConfig parse_corpus(const json& j, std::size_t i, const std::filesystem::path& base) {
  const auto where = "corpora[" + std::to_string(i) + "]";
  check_keys(j, where, {"name", "path", "format", "split", "train_fraction"});
  CorpusConfig c;
  c.path = resolve(base, get<std::string>(j, "path", where, ""));
  if (c.path.empty()) throw InputError(where + ": missing 'path'");
  c.name = get<std::string>(j, "name", where, c.path.stem().string());
  c.format = parse_corpus_format(get<std::string>(j, "format", where, "jsonl"));
  const auto split = get<std::string>(j, "split", where, "stratified");
  if (split == "stratified") {
    c.split_mode = SplitMode::Stratified;
  } else if (split == "predefined") {
    c.split_mode = SplitMode::Predefined;
  } else {
    throw InputError(where + ".split: expected 'stratified' or 'predefined', got '" + split + "'");
  }
  c.train_fraction = get<double>(j, "train_fraction", where, 0.8);
  return c;
}

ModelConfig parse_model(const json& j, std::size_t i) {
  const auto where = "models[" + std::to_string(i) + "]";
  if (j.is_string()) {
    // Shorthand: a bare family name, or a default name such as "doc2vec-50".
    const auto name = j.get<std::string>();
    for (const auto& m : standard_models())
      if (m.name == name) return m;
    ModelConfig m;
    m.family = parse_model_family(name);
    m.name = default_model_name(m);
    return m;
  }
  check_keys(j, where,
             {"name", "family", "size", "scheme", "min_df", "variance_target", "epochs", "train_on_all_text"});
  ModelConfig m;
  m.family = parse_model_family(get<std::string>(j, "family", where, ""));
  m.size = get<std::size_t>(j, "size", where, m.size);
  m.scheme = parse_gow_scheme(get<std::string>(j, "scheme", where, "average"));
  m.min_df = get<std::size_t>(j, "min_df", where, m.min_df);
  m.variance_target = get<double>(j, "variance_target", where, m.variance_target);
  m.epochs = get_optional<std::size_t>(j, "epochs", where);
  m.train_on_all_text = get<bool>(j, "train_on_all_text", where, false);
  m.name = get<std::string>(j, "name", where, default_model_name(m));
  return m;
}

ExperimentConfig from_json(const json& root, const std::filesystem::path& base) {
  check_keys(root, "config",
             {"corpora", "models", "forest", "preprocess", "output", "seed", "jobs", "deterministic"});
  ExperimentConfig cfg;
  cfg.seed = get<std::uint64_t>(root, "seed", "config", cfg.seed);
  cfg.jobs = get<std::size_t>(root, "jobs", "config", cfg.jobs);
  cfg.deterministic = get<bool>(root, "deterministic", "config", cfg.deterministic);
  cfg.output = resolve(base, get<std::string>(root, "output", "config", "output"));

  if (auto it = root.find("corpora"); it != root.end() && !it->is_null()) {
    if (!it->is_array()) throw InputError("config.corpora: expected a list");
    for (std::size_t i = 0; i < it->size(); ++i) cfg.corpora.push_back(parse_corpus((*it)[i], i, base));
  }
  if (auto it = root.find("models"); it != root.end() && !it->is_null()) {
    if (it->is_string() && it->get<std::string>() == "standard") {
      cfg.models = standard_models();
    } else if (it->is_array()) {
      for (std::size_t i = 0; i < it->size(); ++i) cfg.models.push_back(parse_model((*it)[i], i));
    } else {
      throw InputError("config.models: expected a list or 'standard'");
    }
  }
  if (auto it = root.find("forest"); it != root.end() && !it->is_null()) {
    const auto& f = *it;
    check_keys(f, "forest", {"n_trees", "mtry", "min_leaf", "max_depth", "tune", "tune_trees", "step_factor", "improve"});
    cfg.forest.n_trees = get<std::size_t>(f, "n_trees", "forest", cfg.forest.n_trees);
    cfg.forest.mtry = get_optional<std::size_t>(f, "mtry", "forest");
    cfg.forest.min_leaf = get<std::size_t>(f, "min_leaf", "forest", cfg.forest.min_leaf);
    cfg.forest.max_depth = get_optional<std::size_t>(f, "max_depth", "forest");
    cfg.tune_mtry = get<bool>(f, "tune", "forest", !cfg.forest.mtry.has_value());
    cfg.tuning.n_trees = get<std::size_t>(f, "tune_trees", "forest", cfg.tuning.n_trees);
    cfg.tuning.step_factor = get<double>(f, "step_factor", "forest", cfg.tuning.step_factor);
    cfg.tuning.improve = get<double>(f, "improve", "forest", cfg.tuning.improve);
  }
  if (auto it = root.find("preprocess"); it != root.end() && !it->is_null()) {
    const auto& p = *it;
    check_keys(p, "preprocess", {"stopwords", "strip_html", "min_token_len"});
    if (auto sw = get_optional<std::string>(p, "stopwords", "preprocess")) {
      cfg.preprocess.stopword_path = resolve(base, *sw);
    }
    cfg.preprocess.strip_html = get<bool>(p, "strip_html", "preprocess", false);
    cfg.preprocess.min_token_len = get<std::size_t>(p, "min_token_len", "preprocess", 1);
  }
  validate(cfg);
  return cfg;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(root, base_dir);
}

ExperimentConfig parse_config_yaml(const std::string& text, const std::filesystem::path& base_dir) {
  YAML::Node node;
  try {
    node = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw InputError(std::string("config is not valid YAML: ") + e.what());
  }
  return from_json(yaml_to_json(node), base_dir);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  const auto text = read_text(path);
  const auto base = path.parent_path();
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".json") return parse_config_json(text, base);
  if (ext == ".yaml" || ext == ".yml") return parse_config_yaml(text, base);
  throw InputError("config file " + path.string() + ": expected a .yaml, .yml or .json extension");
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.models.empty()) throw InputError("nothing to run: the config lists no models");
  if (cfg.corpora.empty()) throw InputError("nothing to run: the config lists no corpora");
  std::set<std::string> names;
  for (const auto& c : cfg.corpora) {
    if (c.name.empty()) throw InputError("corpus with an empty name");
    if (!names.insert(c.name).second) throw InputError("duplicate corpus name '" + c.name + "'");
    if (!std::filesystem::exists(c.path)) {
      throw InputError("corpus '" + c.name + "': path " + c.path.string() + " does not exist");
    }
    if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) {
      throw InputError("corpus '" + c.name + "': train_fraction must lie in (0, 1)");
    }
  }
  names.clear();
  for (const auto& m : cfg.models) {
    if (m.name.empty()) throw InputError("model with an empty name");
    if (m.name.find_first_of("/\\") != std::string::npos) {
      throw InputError("model name '" + m.name + "' must not contain path separators");
    }
    if (!names.insert(m.name).second) throw InputError("duplicate model name '" + m.name + "'");
    if ((m.family == ModelFamily::Word2vec || m.family == ModelFamily::Doc2vec) && m.size == 0) {
      throw InputError("model '" + m.name + "': size must be positive");
    }
    if (m.variance_target < 0.0 || m.variance_target > 1.0) {
      throw InputError("model '" + m.name + "': variance_target must lie in [0, 1]");
    }
    if (m.epochs && *m.epochs == 0) throw InputError("model '" + m.name + "': epochs must be positive");
  }
  if (cfg.forest.n_trees == 0) throw InputError("forest.n_trees must be positive");
  if (cfg.forest.mtry && *cfg.forest.mtry == 0) throw InputError("forest.mtry must be positive");
  if (cfg.forest.min_leaf == 0) throw InputError("forest.min_leaf must be positive");
  if (cfg.tune_mtry && (cfg.tuning.n_trees == 0 || cfg.tuning.step_factor <= 1.0)) {
    throw InputError("forest tuning needs tune_trees > 0 and step_factor > 1");
  }
  if (cfg.preprocess.stopword_path && !std::filesystem::exists(*cfg.preprocess.stopword_path)) {
    throw InputError("stopword file " + cfg.preprocess.stopword_path->string() + " does not exist");
  }
}

std::string canonical_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["seed"] = cfg.seed;
  auto& corpora = j["corpora"] = nlohmann::ordered_json::array();
  for (const auto& c : cfg.corpora) {
    corpora.push_back({{"name", c.name},
                       {"path", std::filesystem::absolute(c.path).lexically_normal().string()},
                       {"format", c.format == CorpusFormat::Jsonl ? "jsonl" : "dirs"},
                       {"split", c.split_mode == SplitMode::Stratified ? "stratified" : "predefined"},
                       {"train_fraction", c.train_fraction}});
  }
  auto& models = j["models"] = nlohmann::ordered_json::array();
  for (const auto& m : cfg.models) {
    models.push_back({{"name", m.name},
                      {"family", to_string(m.family)},
                      {"size", m.size},
                      {"scheme", to_string(m.scheme)},
                      {"min_df", m.min_df},
                      {"variance_target", m.variance_target},
                      {"epochs", m.epochs ? nlohmann::ordered_json(*m.epochs) : nlohmann::ordered_json(nullptr)},
                      {"train_on_all_text", m.train_on_all_text}});
  }
  j["forest"] = {{"n_trees", cfg.forest.n_trees},
                 {"mtry", cfg.forest.mtry ? nlohmann::ordered_json(*cfg.forest.mtry) : nlohmann::ordered_json(nullptr)},
                 {"min_leaf", cfg.forest.min_leaf},
                 {"max_depth", cfg.forest.max_depth ? nlohmann::ordered_json(*cfg.forest.max_depth)
                                                    : nlohmann::ordered_json(nullptr)},
                 {"tune", cfg.tune_mtry},
                 {"tune_trees", cfg.tuning.n_trees},
                 {"step_factor", cfg.tuning.step_factor},
                 {"improve", cfg.tuning.improve}};
  j["preprocess"] = {
      {"stopwords", cfg.preprocess.stopword_path
                        ? nlohmann::ordered_json(std::filesystem::absolute(*cfg.preprocess.stopword_path).string())
                        : nlohmann::ordered_json(nullptr)},
      {"strip_html", cfg.preprocess.strip_html},
      {"min_token_len", cfg.preprocess.min_token_len}};
  return j.dump();
}

std::string config_hash(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_string(canonical_json(cfg))));
  return buf;
}

}  // namespace docrep
