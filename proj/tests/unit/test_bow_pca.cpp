#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "docrep/bow.hpp"
#include "docrep/error.hpp"
#include "docrep/pca.hpp"
#include "docrep/rng.hpp"
#include "support/oracles.hpp"

using namespace docrep;

namespace {

ProcessedDocument doc(std::string id, std::vector<std::string> stems) { return {std::move(id), "L", {std::move(stems)}}; }

FeatureMatrix matrix(const std::vector<std::vector<double>>& rows) {
  std::vector<std::string> ids, cols;
  for (std::size_t i = 0; i < rows.size(); ++i) ids.push_back("r" + std::to_string(i));
  for (std::size_t j = 0; j < rows[0].size(); ++j) cols.push_back("c" + std::to_string(j));
  FeatureMatrix m(ids, cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[0].size(); ++j) m.at(i, j) = rows[i][j];
  return m;
}

std::vector<std::vector<double>> random_rows(std::mt19937_64& gen, std::size_t n, std::size_t m) {
  std::normal_distribution<double> z(0, 1);
  // Mix independent normals through a random matrix so the spectrum is uneven.
  std::vector<std::vector<double>> mix(m, std::vector<double>(m));
  for (auto& r : mix)
    for (auto& v : r) v = z(gen);
  std::vector<std::vector<double>> rows(n, std::vector<double>(m, 0.0));
  for (auto& r : rows) {
    std::vector<double> e(m);
    for (std::size_t k = 0; k < m; ++k) e[k] = z(gen) * (1.0 + 3.0 / (1.0 + k));
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) r[j] += mix[j][k] * e[k];
  }
  return rows;
}

}  // namespace

TEST(Vocabulary, Thresholds) {
  std::vector<ProcessedDocument> docs;
  for (int i = 0; i < 5; ++i) docs.push_back(doc("d" + std::to_string(i), {"cat", i < 4 ? "dog" : "eel"}));
  const auto v = build_vocabulary(docs, 5);
  EXPECT_EQ(v.terms, (std::vector<std::string>{"cat"}));
  const auto all = build_vocabulary(docs, 1);
  EXPECT_EQ(all.terms, (std::vector<std::string>{"cat", "dog", "eel"}));
  EXPECT_EQ(all.doc_freq.at("dog"), 4u);
  EXPECT_EQ(all.index_of("eel"), 2);
  EXPECT_EQ(all.index_of("fox"), -1);
}

TEST(Vocabulary, EmptyIsAnError) {
  std::vector<ProcessedDocument> docs{doc("a", {"x"}), doc("b", {"y"})};
  EXPECT_THROW(build_vocabulary(docs, 5), InputError);
}

TEST(TfMatrix, Counts) {
  std::vector<ProcessedDocument> docs{doc("a", {"cat", "cat", "dog"}), doc("b", {}), doc("c", {"owl", "bat"})};
  Vocabulary v = build_vocabulary(std::span(docs).first(1), 1);
  const auto m = tf_matrix(docs, v);
  EXPECT_EQ(m.column_names(), (std::vector<std::string>{"cat", "dog"}));
  EXPECT_EQ(m.at(0, 0), 2);
  EXPECT_EQ(m.at(0, 1), 1);
  EXPECT_EQ(m.at(1, 0) + m.at(1, 1), 0);
  EXPECT_EQ(m.at(2, 0) + m.at(2, 1), 0);
}

TEST(TfMatrix, RowSumsAreInVocabularyLength) {
  std::mt19937_64 gen(3);
  std::vector<ProcessedDocument> docs;
  for (int d = 0; d < 30; ++d) {
    std::vector<std::string> s;
    for (int i = 0; i < 20; ++i) s.push_back(std::string(1, static_cast<char>('a' + gen() % 12)));
    docs.push_back(doc("d" + std::to_string(d), s));
  }
  const auto v = build_vocabulary(docs, 8);
  const auto m = tf_matrix(docs, v);
  for (std::size_t r = 0; r < docs.size(); ++r) {
    double sum = 0, expected = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) sum += m.at(r, c);
    for (const auto& t : docs[r].sentences[0]) expected += v.index_of(t) >= 0;
    EXPECT_EQ(sum, expected);
  }
}

TEST(TfIdf, Formula) {
  EXPECT_DOUBLE_EQ(smooth_idf(7, 7), 1.0);
  EXPECT_NEAR(smooth_idf(1, 2), 1.4054651081081644, 1e-15);
  std::vector<ProcessedDocument> train{doc("a", {"cat", "dog"}), doc("b", {"cat"})};
  const auto v = build_vocabulary(train, 1);
  const auto m = tfidf_matrix(train, v, v.doc_freq, 2);
  EXPECT_DOUBLE_EQ(m.at(0, 0), 1.0);                       // df = n
  EXPECT_NEAR(m.at(0, 1), std::log(1.5) + 1, 1e-15);        // n = 2, df = 1
  EXPECT_EQ(m.at(1, 1), 0.0);                               // tf = 0
  EXPECT_EQ(tfidf_matrix(train, v), m);
}

TEST(Pca, LineIsRankOne) {
  const auto m = matrix({{1, 1}, {2, 2}, {3, 3}, {-1, -1}});
  const auto model = pca_fit(m, 0.8);
  ASSERT_EQ(model.n_components(), 1u);
  EXPECT_NEAR(model.explained_variance_ratio[0], 1.0, 1e-12);
  EXPECT_NEAR(model.component(0)[0], std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(model.component(0)[1], std::sqrt(0.5), 1e-12);
}

TEST(Pca, FullTargetKeepsRank) {
  std::mt19937_64 gen(11);
  const auto m = matrix(random_rows(gen, 30, 5));
  EXPECT_EQ(pca_fit(m, 1.0).n_components(), 5u);
}

TEST(Pca, DegenerateData) {
  EXPECT_THROW(pca_fit(matrix({{1, 2}, {1, 2}, {1, 2}}), 0.8), NumericError);
}

TEST(Pca, AgainstJacobiOracle) {
  std::mt19937_64 gen(5);
  for (std::size_t m : {std::size_t{2}, std::size_t{5}, std::size_t{8}, std::size_t{17}, std::size_t{40}, std::size_t{64}}) {
    for (std::size_t n : {std::size_t{m / 2 + 2}, std::size_t{50}, std::size_t{120}}) {
      const auto rows = random_rows(gen, n, m);
      const auto x = matrix(rows);
      const auto ev = oracle::jacobi_eigenvalues(oracle::covariance(rows));
      double total = 0;
      for (double e : ev) total += e;
      for (double target : {0.5, 0.8, 0.95}) {
        const auto model = pca_fit(x, target);
        // Smallest p reaching the target.
        std::size_t p = 0;
        double cum = 0;
        while (p < ev.size() && cum / total < target - 1e-12) cum += ev[p++];
        ASSERT_EQ(model.n_components(), p) << "n=" << n << " m=" << m << " target=" << target;
        double ratio_sum = 0;
        for (std::size_t k = 0; k < p; ++k) {
          EXPECT_NEAR(model.explained_variance[k], ev[k], 1e-6 * std::max(1.0, ev[0]));
          EXPECT_NEAR(model.explained_variance_ratio[k], ev[k] / total, 1e-8);
          if (k > 0) EXPECT_LE(model.explained_variance_ratio[k], model.explained_variance_ratio[k - 1] + 1e-15);
          ratio_sum += model.explained_variance_ratio[k];
          for (std::size_t l = 0; l <= k; ++l) {
            double dot = 0;
            for (std::size_t j = 0; j < m; ++j) dot += model.component(k)[j] * model.component(l)[j];
            EXPECT_NEAR(dot, k == l ? 1.0 : 0.0, 1e-8);
          }
        }
        EXPECT_GE(ratio_sum, target - 1e-12);
        EXPECT_LE(ratio_sum, 1 + 1e-12);

        // Projected training data: centred, with the eigenvalues as variances.
        const auto proj = pca_transform(model, x);
        ASSERT_EQ(proj.cols(), p);
        for (std::size_t k = 0; k < p; ++k) {
          double mean = 0, var = 0;
          for (std::size_t r = 0; r < n; ++r) mean += proj.at(r, k) / n;
          for (std::size_t r = 0; r < n; ++r) var += (proj.at(r, k) - mean) * (proj.at(r, k) - mean) / (n - 1);
          EXPECT_LE(std::abs(mean), 1e-8 * std::max(1.0, std::sqrt(ev[0])));
          EXPECT_NEAR(var, ev[k], 1e-6 * std::max(1.0, ev[0]));
        }
      }
    }
  }
}

TEST(Pca, TransformSingleAxis) {
  PcaModel model;
  model.mean = {2.0, 5.0};
  model.components = {1.0, 0.0};
  model.explained_variance = {1.0};
  model.explained_variance_ratio = {1.0};
  const auto out = pca_transform(model, matrix({{3, 7}, {0, 1}}));
  EXPECT_EQ(out.column_names(), (std::vector<std::string>{"pc1"}));
  EXPECT_DOUBLE_EQ(out.at(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(out.at(1, 0), -2.0);
  EXPECT_THROW(pca_transform(model, matrix({{1, 2, 3}})), InputError);
}

TEST(Pca, TrainFitTestTransformLeavesModelUntouched) {
  std::mt19937_64 gen(9);
  const auto train = matrix(random_rows(gen, 40, 6));
  const auto test = matrix(random_rows(gen, 10, 6));
  const auto model = pca_fit(train, 0.8);
  const auto before = hash_string(to_json(model));
  const auto out = pca_transform(model, test);
  EXPECT_EQ(out.cols(), model.n_components());
  EXPECT_EQ(hash_string(to_json(model)), before);
  EXPECT_EQ(pca_model_from_json(to_json(model)), model);
}

TEST(Pca, WideMatrixUsesGramPath) {
  std::mt19937_64 gen(2);
  const auto rows = random_rows(gen, 12, 30);
  const auto model = pca_fit(matrix(rows), 0.9);
  const auto ev = oracle::jacobi_eigenvalues(oracle::covariance(rows));
  for (std::size_t k = 0; k < model.n_components(); ++k) EXPECT_NEAR(model.explained_variance[k], ev[k], 1e-6 * ev[0]);
}
