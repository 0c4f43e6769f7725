#include <algorithm>
#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "docrep/error.hpp"
#include "docrep/metrics.hpp"
#include "support/oracles.hpp"

using namespace docrep;

using Labels = std::vector<std::string>;

namespace {

// std::vector<bool> has no contiguous storage to view.
std::optional<double> auroc_of(const std::vector<double>& scores, const std::vector<bool>& pos) {
  std::unique_ptr<bool[]> flags(new bool[pos.size()]);
  std::copy(pos.begin(), pos.end(), flags.get());
  return auroc(scores, std::span<const bool>(flags.get(), pos.size()));
}

}  // namespace

TEST(Accuracy, Examples) {
  EXPECT_EQ(accuracy(Labels{"a", "b"}, Labels{"a", "b"}), 1.0);
  EXPECT_EQ(accuracy(Labels{"a", "b"}, Labels{"b", "a"}), 0.0);
  Labels t(100, "a"), p(100, "a");
  for (int i = 0; i < 11; ++i) p[i] = "b";
  EXPECT_DOUBLE_EQ(accuracy(t, p), 0.89);
  EXPECT_THROW(accuracy(Labels{"a"}, Labels{"a", "b"}), InputError);
  EXPECT_THROW(accuracy(Labels{}, Labels{}), InputError);
}

TEST(Confusion, TraceOverTotal) {
  const Labels t{"a", "a", "b", "c", "c", "c"}, p{"a", "b", "b", "c", "a", "c"};
  const auto cm = confusion_matrix(t, p, Labels{"a", "b", "c"});
  EXPECT_EQ(cm.total(), 6u);
  EXPECT_EQ(cm.trace(), 4u);
  EXPECT_EQ(cm.counts[2][0], 1u);
  EXPECT_DOUBLE_EQ(static_cast<double>(cm.trace()) / cm.total(), accuracy(t, p));
}

TEST(PerClass, Examples) {
  // Class a: TP 2, FP 1, FN 0.
  const Labels t{"a", "a", "b", "b"}, p{"a", "a", "a", "b"};
  const auto s = per_class_prf(t, p, Labels{"a", "b", "z"});
  EXPECT_DOUBLE_EQ(s[0].precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(s[0].recall, 1.0);
  EXPECT_DOUBLE_EQ(s[1].precision, 1.0);
  EXPECT_DOUBLE_EQ(s[1].recall, 0.5);
  EXPECT_EQ(s[2].precision + s[2].recall + s[2].f1, 0.0);
  EXPECT_THROW(per_class_prf(t, p, Labels{"a"}), InputError);
}

TEST(PerClass, EqualPrecisionAndRecall) {
  // TP 3, FP 1, FN 1 for class a.
  const Labels t{"a", "a", "a", "a", "b", "b"}, p{"a", "a", "a", "b", "a", "b"};
  const auto s = per_class_prf(t, p, Labels{"a", "b"});
  EXPECT_DOUBLE_EQ(s[0].precision, 0.75);
  EXPECT_DOUBLE_EQ(s[0].recall, 0.75);
  EXPECT_DOUBLE_EQ(s[0].f1, 0.75);
}

TEST(PerClass, MicroRecallIsAccuracy) {
  std::mt19937_64 gen(4);
  const Labels labels{"a", "b", "c", "d"};
  for (int trial = 0; trial < 50; ++trial) {
    Labels t, p;
    for (int i = 0; i < 40; ++i) {
      t.push_back(labels[gen() % 4]);
      p.push_back(labels[gen() % 4]);
    }
    const auto cm = confusion_matrix(t, p, labels);
    std::size_t tp = 0, fn = 0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) (i == j ? tp : fn) += cm.counts[i][j];
    EXPECT_DOUBLE_EQ(static_cast<double>(tp) / (tp + fn), accuracy(t, p));
    for (const auto& s : per_class_prf(t, p, labels)) {
      EXPECT_GE(s.f1, 0.0);
      EXPECT_LE(s.f1, 1.0);
    }
  }
}

TEST(Auroc, Examples) {
  EXPECT_EQ(auroc_of(std::vector<double>{0.9, 0.8, 0.1}, std::vector<bool>{true, true, false}), 1.0);
  EXPECT_EQ(auroc_of(std::vector<double>{0.5, 0.5, 0.5}, std::vector<bool>{true, false, false}), 0.5);
  EXPECT_EQ(auroc_of(std::vector<double>{0.9, 0.4, 0.6}, std::vector<bool>{true, false, true}), 1.0);
  EXPECT_FALSE(auroc_of(std::vector<double>{0.1, 0.2}, std::vector<bool>{true, true}).has_value());
  EXPECT_FALSE(auroc_of(std::vector<double>{0.1, 0.2}, std::vector<bool>{false, false}).has_value());
}

TEST(Auroc, OneVsRest) {
  const std::vector<std::vector<double>> dist{{0.9, 0.1}, {0.4, 0.6}, {0.6, 0.4}};
  const Labels t{"a", "b", "a"}, labels{"a", "b"};
  EXPECT_EQ(auroc_ovr(dist, t, labels, 0), 1.0);
  EXPECT_EQ(auroc_ovr(dist, t, labels, 1), 1.0);
}

TEST(Auroc, AgainstPairCounting) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + gen() % 199;
    std::vector<double> s(n);
    std::vector<bool> pos(n);
    const bool coarse = trial % 2 == 0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = coarse ? static_cast<double>(gen() % 5) / 4 : std::uniform_real_distribution<double>(0, 1)(gen);
      pos[i] = gen() % 3 == 0;
    }
    const auto expected = oracle::auroc_pairs(s, pos);
    const auto got = auroc_of(s, pos);
    ASSERT_EQ(got.has_value(), expected.has_value());
    if (!got) continue;
    EXPECT_NEAR(*got, *expected, 1e-12);
    std::vector<double> rev(n);
    for (std::size_t i = 0; i < n; ++i) rev[i] = -s[i];
    EXPECT_NEAR(*auroc_of(rev, pos), 1.0 - *got, 1e-12);
  }
}

TEST(Report, EvaluateAndSerialise) {
  const Labels t{"a", "b", "b"}, p{"a", "b", "a"}, labels{"a", "b", "c"};
  const std::vector<std::vector<double>> dist{{0.8, 0.2, 0}, {0.3, 0.7, 0}, {0.6, 0.4, 0}};
  const auto r = evaluate("m", "task", t, p, dist, labels);
  EXPECT_DOUBLE_EQ(r.accuracy, 2.0 / 3.0);
  ASSERT_EQ(r.per_class.size(), 3u);
  EXPECT_FALSE(r.per_class[2].auroc.has_value());
  EXPECT_EQ(r.per_class[0].auroc, 1.0);
  const auto back = report_from_json(to_json(r, "abc"));
  EXPECT_EQ(back.model_name, "m");
  EXPECT_EQ(back.labels, labels);
  EXPECT_EQ(back.per_class[0].precision, r.per_class[0].precision);
  EXPECT_FALSE(back.per_class[2].auroc.has_value());
  const auto csv = to_csv(r, "abc");
  EXPECT_EQ(csv.rfind("# config abc", 0), 0u);
  EXPECT_NE(csv.find("NA"), std::string::npos);
}
