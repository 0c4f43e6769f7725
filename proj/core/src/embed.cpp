#include "docrep/embed.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "docrep/error.hpp"
#include "docrep/rng.hpp"

namespace docrep {

std::string to_string(EmbeddingMode mode) {
  switch (mode) {
    case EmbeddingMode::Cbow: return "cbow";
    case EmbeddingMode::SkipGram: return "skipgram";
    case EmbeddingMode::PvDm: return "pvdm";
  }
  return "?";
}

EmbeddingMode parse_embedding_mode(const std::string& name) {
  if (name == "cbow") return EmbeddingMode::Cbow;
  if (name == "skipgram" || name == "skip-gram" || name == "sg") return EmbeddingMode::SkipGram;
  if (name == "pvdm" || name == "pv-dm") return EmbeddingMode::PvDm;
  throw InputError("unknown embedding mode '" + name + "'");
}

EmbeddingParams EmbeddingParams::doc2vec(std::size_t size) {
  EmbeddingParams p;
  p.size = size;
  p.epochs = 20;
  p.mode = EmbeddingMode::PvDm;
  return p;
}

EmbeddingParams EmbeddingParams::word2vec(std::size_t size) {
  EmbeddingParams p;
  p.size = size;
  return p;
}

std::ptrdiff_t WordEmbeddings::index_of(const std::string& word) const {
  auto it = std::lower_bound(vocab.begin(), vocab.end(), word);
  return it != vocab.end() && *it == word ? it - vocab.begin() : -1;
}

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

// Lexicographic vocabulary of stems with count >= min_count.
WordEmbeddings init_vocabulary(std::span<const ProcessedDocument> docs, const EmbeddingParams& p) {
  if (p.size == 0) throw InputError("embedding size must be >= 1");
  std::map<std::string, std::uint64_t> counts;
  for (const auto& d : docs)
    for (const auto& s : d.sentences)
      for (const auto& w : s) ++counts[w];
  WordEmbeddings emb;
  emb.size = p.size;
  for (const auto& [w, c] : counts) {
    if (c >= p.min_count) {
      emb.vocab.push_back(w);
      emb.counts.push_back(c);
    }
  }
  if (emb.vocab.empty()) throw InputError("cannot train embeddings on an empty corpus");
  emb.vectors.resize(emb.vocab.size() * p.size);
  emb.output.assign(emb.vocab.size() * p.size, 0.0);
  return emb;
}

void random_init(std::span<double> v, std::size_t size, Rng& rng) {
  const double scale = 1.0 / static_cast<double>(size);
  for (auto& x : v) x = (rng.uniform() - 0.5) * scale;
}

// Draws from the unigram^ns_exponent distribution.
class NoiseSampler {
public:
  NoiseSampler(std::span<const std::uint64_t> counts, double exponent) {
    cumulative_.reserve(counts.size());
    double acc = 0.0;
    for (auto c : counts) {
      acc += std::pow(static_cast<double>(c), exponent);
      cumulative_.push_back(acc);
    }
  }

  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(it - cumulative_.begin(), cumulative_.size() - 1);
  }

private:
  std::vector<double> cumulative_;
};

// Probability of keeping each occurrence of a word under frequent-word
// downsampling; 1 when sample <= 0.
std::vector<double> keep_probabilities(std::span<const std::uint64_t> counts, double sample) {
  std::vector<double> keep(counts.size(), 1.0);
  if (sample <= 0) return keep;
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  const double threshold = sample * total;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double c = static_cast<double>(counts[i]);
    keep[i] = std::min(1.0, (std::sqrt(c / threshold) + 1.0) * threshold / c);
  }
  return keep;
}

// Shared machinery for the three training loops.
class Trainer {
public:
  Trainer(const EmbeddingParams& p, WordEmbeddings& words, Rng& rng)
      : p_(p),
        words_(words),
        rng_(rng),
        noise_(words.counts, p.ns_exponent),
        keep_(keep_probabilities(words.counts, p.sample)),
        hidden_(p.size),
        update_(p.size) {}

  // In-vocabulary word indices of a token stream after downsampling.
  std::vector<std::size_t> encode(std::span<const std::string> tokens) {
    std::vector<std::size_t> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
      auto idx = words_.index_of(t);
      if (idx < 0) continue;
      const auto i = static_cast<std::size_t>(idx);
      if (keep_[i] < 1.0 && rng_.uniform() >= keep_[i]) continue;
      out.push_back(i);
    }
    return out;
  }

  std::span<double> word_vec(std::size_t i) { return {words_.vectors.data() + i * p_.size, p_.size}; }
  std::span<double> out_vec(std::size_t i) { return {words_.output.data() + i * p_.size, p_.size}; }

  // One prediction of `target` from hidden_, accumulating into update_.
  double predict(std::size_t target, double alpha, bool update_outputs) {
    outputs_.clear();
    outputs_.push_back(out_vec(target));
    for (std::size_t k = 0; k < p_.negatives; ++k) {
      const auto w = noise_.draw(rng_);
      if (w == target) continue;
      outputs_.push_back(out_vec(w));
    }
    std::fill(update_.begin(), update_.end(), 0.0);
    if (update_outputs) return negative_sampling_step(hidden_, outputs_, alpha, update_);
    frozen_.assign(outputs_.begin(), outputs_.end());
    double loss = 0.0;
    for (std::size_t k = 0; k < frozen_.size(); ++k) {
      const double f = dot(hidden_, frozen_[k]);
      const double label = k == 0 ? 1.0 : 0.0;
      loss -= k == 0 ? log_sigmoid(f) : log_sigmoid(-f);
      axpy((label - sigmoid(f)) * alpha, frozen_[k], update_);
    }
    return loss;
  }

  // Window around position i: [lo, hi) minus i, with a random reduction.
  std::pair<std::size_t, std::size_t> window(std::size_t i, std::size_t n) {
    const auto reduced = static_cast<std::size_t>(rng_.below(p_.window));
    const auto span = p_.window - reduced;
    return {i >= span ? i - span : 0, std::min(n, i + span + 1)};
  }

  // CBOW / PV-DM step: hidden = mean(extra + context words), update shared.
  double context_step(std::span<const std::size_t> seq, std::size_t i, std::span<double> extra,
                      double alpha, bool update_words, bool update_outputs) {
    auto [lo, hi] = window(i, seq.size());
    std::size_t count = extra.empty() ? 0 : 1;
    std::fill(hidden_.begin(), hidden_.end(), 0.0);
    if (!extra.empty()) axpy(1.0, extra, hidden_);
    for (std::size_t j = lo; j < hi; ++j) {
      if (j == i) continue;
      axpy(1.0, word_vec(seq[j]), hidden_);
      ++count;
    }
    if (count == 0) return -1.0;
    for (auto& h : hidden_) h /= static_cast<double>(count);
    const double loss = predict(seq[i], alpha, update_outputs);
    const double share = 1.0 / static_cast<double>(count);
    if (!extra.empty()) axpy(share, update_, extra);
    if (update_words) {
      for (std::size_t j = lo; j < hi; ++j) {
        if (j != i) axpy(share, update_, word_vec(seq[j]));
      }
    }
    return loss;
  }

  // Skip-gram step: each context word predicts the center word.
  double skipgram_step(std::span<const std::size_t> seq, std::size_t i, double alpha, std::size_t& n) {
    auto [lo, hi] = window(i, seq.size());
    double loss = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
      if (j == i) continue;
      auto v = word_vec(seq[j]);
      std::copy(v.begin(), v.end(), hidden_.begin());
      loss += predict(seq[i], alpha, true);
      axpy(1.0, update_, v);
      ++n;
    }
    return loss;
  }

  double alpha(double progress) const {
    const double a = p_.learning_rate - (p_.learning_rate - p_.min_learning_rate) * progress;
    return std::max(a, p_.min_learning_rate);
  }

private:
  const EmbeddingParams& p_;
  WordEmbeddings& words_;
  Rng& rng_;
  NoiseSampler noise_;
  std::vector<double> keep_;
  std::vector<double> hidden_;
  std::vector<double> update_;
  std::vector<std::span<double>> outputs_;
  std::vector<std::span<const double>> frozen_;
};

std::uint64_t total_words(const WordEmbeddings& w) {
  return std::accumulate(w.counts.begin(), w.counts.end(), std::uint64_t{0});
}

std::vector<std::string> flatten(const ProcessedDocument& d) {
  std::vector<std::string> out;
  for (const auto& s : d.sentences) out.insert(out.end(), s.begin(), s.end());
  return out;
}

}  // namespace

NegativeSamplingGradient negative_sampling_gradient(
    std::span<const double> input, std::span<const double> positive,
    std::span<const std::span<const double>> negatives) {
  NegativeSamplingGradient g;
  g.grad_input.assign(input.size(), 0.0);
  auto term = [&](std::span<const double> u, double label) {
    const double f = dot(input, u);
    g.loss -= label > 0 ? log_sigmoid(f) : log_sigmoid(-f);
    const double coef = sigmoid(f) - label;
    axpy(coef, u, g.grad_input);
    std::vector<double> gu(input.size());
    for (std::size_t i = 0; i < gu.size(); ++i) gu[i] = coef * input[i];
    g.grad_outputs.push_back(std::move(gu));
  };
  term(positive, 1.0);
  for (auto n : negatives) term(n, 0.0);
  return g;
}

double negative_sampling_step(std::span<const double> input, std::span<const std::span<double>> outputs,
                              double alpha, std::span<double> input_update) {
  double loss = 0.0;
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    const double f = dot(input, outputs[k]);
    const double label = k == 0 ? 1.0 : 0.0;
    loss -= k == 0 ? log_sigmoid(f) : log_sigmoid(-f);
    const double g = (label - sigmoid(f)) * alpha;
    axpy(g, outputs[k], input_update);
    axpy(g, input, outputs[k]);
  }
  return loss;
}

WordEmbeddings train_word2vec(std::span<const ProcessedDocument> docs, const EmbeddingParams& p) {
  if (p.mode == EmbeddingMode::PvDm) throw InputError("train_word2vec needs mode cbow or skipgram");
  auto emb = init_vocabulary(docs, p);
  Rng rng(p.seed);
  random_init(emb.vectors, p.size, rng);
  Trainer trainer(p, emb, rng);

  const double total_work = static_cast<double>(total_words(emb)) * static_cast<double>(p.epochs);
  double done = 0.0;
  for (std::size_t epoch = 0; epoch < p.epochs; ++epoch) {
    double loss = 0.0;
    std::size_t steps = 0;
    for (const auto& d : docs) {
      for (const auto& s : d.sentences) {
        const double alpha = trainer.alpha(done / total_work);
        done += static_cast<double>(s.size());
        const auto seq = trainer.encode(s);
        for (std::size_t i = 0; i < seq.size(); ++i) {
          if (p.mode == EmbeddingMode::Cbow) {
            const double l = trainer.context_step(seq, i, {}, alpha, true, true);
            if (l >= 0) {
              loss += l;
              ++steps;
            }
          } else {
            loss += trainer.skipgram_step(seq, i, alpha, steps);
          }
        }
      }
    }
    emb.epoch_loss.push_back(steps ? loss / static_cast<double>(steps) : 0.0);
  }
  return emb;
}

std::vector<double> doc_vector_average(const WordEmbeddings& emb, const ProcessedDocument& doc) {
  std::vector<double> out(emb.size, 0.0);
  std::size_t n = 0;
  for (const auto& s : doc.sentences) {
    for (const auto& w : s) {
      auto idx = emb.index_of(w);
      if (idx < 0) continue;
      axpy(1.0, emb.vector(static_cast<std::size_t>(idx)), out);
      ++n;
    }
  }
  if (n > 0)
    for (auto& x : out) x /= static_cast<double>(n);
  return out;
}

DocEmbeddings train_doc2vec(std::span<const ProcessedDocument> docs, const EmbeddingParams& p) {
  if (p.mode != EmbeddingMode::PvDm) throw InputError("train_doc2vec needs mode pvdm");
  DocEmbeddings model;
  model.params = p;
  model.size = p.size;
  model.words = init_vocabulary(docs, p);
  for (const auto& d : docs) model.doc_ids.push_back(d.id);
  {
    auto ids = model.doc_ids;
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw InputError("train_doc2vec: document ids must be unique");
    }
  }
  Rng rng(p.seed);
  random_init(model.words.vectors, p.size, rng);
  model.vectors.resize(docs.size() * p.size);
  random_init(model.vectors, p.size, rng);
  Trainer trainer(p, model.words, rng);

  std::vector<std::vector<std::string>> flat;
  flat.reserve(docs.size());
  for (const auto& d : docs) flat.push_back(flatten(d));

  const double total_work = static_cast<double>(total_words(model.words)) * static_cast<double>(p.epochs);
  double done = 0.0;
  std::vector<std::size_t> order(docs.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t epoch = 0; epoch < p.epochs; ++epoch) {
    rng.shuffle(std::span(order));
    double loss = 0.0;
    std::size_t steps = 0;
    for (auto d : order) {
      const double alpha = trainer.alpha(done / total_work);
      done += static_cast<double>(flat[d].size());
      const auto seq = trainer.encode(flat[d]);
      std::span<double> doc_vec(model.vectors.data() + d * p.size, p.size);
      for (std::size_t i = 0; i < seq.size(); ++i) {
        loss += trainer.context_step(seq, i, doc_vec, alpha, true, true);
        ++steps;
      }
    }
    model.words.epoch_loss.push_back(steps ? loss / static_cast<double>(steps) : 0.0);
  }
  return model;
}

std::vector<double> infer_doc_vector(const DocEmbeddings& model, const ProcessedDocument& doc,
                                     std::size_t epochs) {
  std::vector<double> vec(model.size, 0.0);
  const auto tokens = flatten(doc);
  const bool any_known = std::any_of(tokens.begin(), tokens.end(),
                                     [&](const auto& t) { return model.words.index_of(t) >= 0; });
  if (!any_known || epochs == 0) return vec;

  Rng rng(derive_seed(model.params.seed, hash_string(doc.id)));
  random_init(vec, model.size, rng);
  // The trainer never writes through `words` when updates are disabled.
  auto& words = const_cast<WordEmbeddings&>(model.words);
  Trainer trainer(model.params, words, rng);
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    const double alpha = trainer.alpha(static_cast<double>(epoch) / static_cast<double>(epochs));
    const auto seq = trainer.encode(tokens);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      trainer.context_step(seq, i, vec, alpha, false, false);
    }
  }
  return vec;
}

FeatureMatrix to_feature_matrix(const WordEmbeddings& emb) {
  std::vector<std::string> cols;
  for (std::size_t k = 0; k < emb.size; ++k) cols.push_back("d" + std::to_string(k + 1));
  FeatureMatrix m(emb.vocab, std::move(cols));
  for (std::size_t r = 0; r < emb.vocab.size(); ++r) {
    auto v = emb.vector(r);
    std::copy(v.begin(), v.end(), m.row(r).begin());
  }
  return m;
}

FeatureMatrix to_feature_matrix(const DocEmbeddings& emb) {
  std::vector<std::string> cols;
  for (std::size_t k = 0; k < emb.size; ++k) cols.push_back("d" + std::to_string(k + 1));
  FeatureMatrix m(emb.doc_ids, std::move(cols));
  for (std::size_t r = 0; r < emb.doc_ids.size(); ++r) {
    auto v = emb.vector(r);
    std::copy(v.begin(), v.end(), m.row(r).begin());
  }
  return m;
}

std::string params_json(const EmbeddingParams& p) {
  nlohmann::json j = {{"size", p.size},
                      {"min_count", p.min_count},
                      {"window", p.window},
                      {"negatives", p.negatives},
                      {"epochs", p.epochs},
                      {"learning_rate", p.learning_rate},
                      {"min_learning_rate", p.min_learning_rate},
                      {"sample", p.sample},
                      {"ns_exponent", p.ns_exponent},
                      {"seed", p.seed},
                      {"mode", to_string(p.mode)}};
  return j.dump(2);
}

}  // namespace docrep
