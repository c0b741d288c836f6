#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "emosim/error.h"
#include "emosim/gold_eval.h"
#include "emosim/ranking.h"
#include "test_util.h"

namespace emosim {
namespace {

using testing::TempDir;

AnnotationMatrix Matrix(std::vector<std::vector<Rating>> ratings, Question q = Question::kQ1Equivalence) {
  AnnotationMatrix m;
  m.question = q;
  for (std::size_t p = 0; p < ratings.at(0).size(); ++p)
    m.pairs.push_back({"U+1F600", "U+" + std::to_string(1000 + p)});
  m.ratings = std::move(ratings);
  return m;
}

// Ratings of one pair as columns: every annotator row gets column p.
AnnotationMatrix FromUnits(const std::vector<std::vector<Rating>>& units) {
  std::size_t annotators = 0;
  for (const auto& u : units) annotators = std::max(annotators, u.size());
  std::vector<std::vector<Rating>> rows(annotators, std::vector<Rating>(units.size()));
  for (std::size_t p = 0; p < units.size(); ++p)
    for (std::size_t a = 0; a < units[p].size(); ++a) rows[a][p] = units[p][a];
  return Matrix(rows);
}

TEST(AggregateGold, Examples) {
  const auto all4 = FromUnits({std::vector<Rating>(10, 4)});
  auto g = AggregateGold(all4, all4);
  EXPECT_EQ(g[0].similarity, 4.0);

  const auto all0 = FromUnits({std::vector<Rating>(10, 0)});
  g = AggregateGold(all0, all0);
  EXPECT_EQ(g[0].similarity, 0.0);

  g = AggregateGold(FromUnits({{0, 1, 2, 3, 4}}), FromUnits({{4, 3, 2, 1, 0}}));
  EXPECT_EQ(g[0].q1_mean, 2.0);
  EXPECT_EQ(g[0].q2_mean, 2.0);
  EXPECT_EQ(g[0].similarity, 2.0);
}

TEST(AggregateGold, MissingRatingsSkipped) {
  const auto g = AggregateGold(FromUnits({{1, std::nullopt, 3}}), FromUnits({{4, 4, std::nullopt}}));
  EXPECT_EQ(g[0].q1_mean, 2.0);
  EXPECT_EQ(g[0].q2_mean, 4.0);
  EXPECT_EQ(g[0].similarity, 3.0);
}

TEST(AggregateGold, Errors) {
  auto a = FromUnits({{1, 2}, {3, 4}});
  auto b = FromUnits({{1, 2}, {3, 4}});
  b.pairs[1].second = "U+1F602";
  EXPECT_THROW(AggregateGold(a, b), DomainError);
  const auto none = FromUnits({{std::nullopt, std::nullopt}});
  EXPECT_THROW(AggregateGold(none, FromUnits({{1, 2}})), DomainError);
}

TEST(AggregateGold, AnnotatorPermutationInvariant) {
  std::mt19937_64 rng(8);
  std::vector<std::vector<Rating>> rows(10, std::vector<Rating>(30));
  for (auto& r : rows)
    for (auto& v : r) v = rng() % 7 == 0 ? Rating{} : Rating{static_cast<int>(rng() % 5)};
  for (std::size_t p = 0; p < 30; ++p) rows[0][p] = 2;  // no empty pair
  const auto q1 = Matrix(rows);
  const auto base = AggregateGold(q1, q1);
  for (int round = 0; round < 10; ++round) {
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto shuffled = Matrix(rows);
    const auto g = AggregateGold(shuffled, shuffled);
    for (std::size_t p = 0; p < g.size(); ++p) {
      EXPECT_EQ(g[p].q1_mean, base[p].q1_mean);
      EXPECT_EQ(g[p].similarity, base[p].similarity);
    }
  }
}

TEST(RatingHistogram, Counts) {
  const auto m = FromUnits({{0, 4, 4, std::nullopt, 2}});
  EXPECT_EQ(RatingHistogram(m, 0), (std::array<std::size_t, 5>{1, 0, 1, 0, 2}));
}

TEST(AnnotationMatrix, Validate) {
  EXPECT_THROW(Matrix({{1, 2}, {1}}).Validate(), DomainError);
  EXPECT_THROW(Matrix({{1, 5}}).Validate(), DomainError);
  EXPECT_NO_THROW(Matrix({{1, std::nullopt}}).Validate());
}

// Independent alpha: pairwise disagreement averages instead of the
// coincidence matrix. D_o averages delta^2 over ordered pairs of values
// within a unit (each weighted 1/(m_u - 1)); D_e over all ordered pairs of
// pooled values.
double PairwiseOrdinalAlpha(const std::vector<std::vector<int>>& units) {
  std::vector<int> pooled;
  for (const auto& u : units)
    if (u.size() >= 2) pooled.insert(pooled.end(), u.begin(), u.end());
  std::vector<double> freq(5, 0.0);
  for (int v : pooled) freq[v] += 1;
  auto delta2 = [&](int c, int k) {
    if (c > k) std::swap(c, k);
    double s = 0;
    for (int g = c; g <= k; ++g) s += freq[g];
    s -= (freq[c] + freq[k]) / 2;
    return s * s;
  };
  const double n = static_cast<double>(pooled.size());
  double within = 0;
  for (const auto& u : units) {
    if (u.size() < 2) continue;
    double sum = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < u.size(); ++j)
        if (i != j) sum += delta2(u[i], u[j]);
    within += sum / static_cast<double>(u.size() - 1);
  }
  double across = 0;
  for (std::size_t i = 0; i < pooled.size(); ++i)
    for (std::size_t j = 0; j < pooled.size(); ++j)
      if (i != j) across += delta2(pooled[i], pooled[j]);
  const double d_o = within / n;
  const double d_e = across / (n * (n - 1));
  return 1 - d_o / d_e;
}

TEST(KrippendorffAlpha, TwoByTwoFixture) {
  // Coincidences o(0,4) = o(4,0) = 2, n_0 = n_4 = 2, delta^2(0,4) = (4 - 2)^2 = 4:
  // alpha = 1 - (n - 1) * sum(o * d2) / sum(n_c * n_k * d2) = 1 - 3 * 16 / 32.
  const auto r = KrippendorffAlphaOrdinal(Matrix({{0, 4}, {4, 0}}));
  EXPECT_NEAR(r.alpha, -0.5, 1e-9);
  EXPECT_NEAR(PairwiseOrdinalAlpha({{0, 4}, {4, 0}}), -0.5, 1e-12);
  EXPECT_EQ(r.pairable_values, 4u);
  EXPECT_EQ(r.units_used, 2u);
  EXPECT_FALSE(r.no_variation);
}

TEST(KrippendorffAlpha, PerfectAgreementIsExactlyOne) {
  const auto r = KrippendorffAlphaOrdinal(FromUnits({{0, 0, 0}, {2, 2, 2}, {4, 4, 4}, {1, 1}}));
  EXPECT_EQ(r.alpha, 1.0);
  EXPECT_EQ(r.observed_disagreement, 0.0);
}

TEST(KrippendorffAlpha, NoVariationConvention) {
  const auto r = KrippendorffAlphaOrdinal(FromUnits({{3, 3}, {3, 3, 3}}));
  EXPECT_TRUE(r.no_variation);
  EXPECT_EQ(r.alpha, 1.0);
  EXPECT_EQ(r.expected_disagreement, 0.0);
}

TEST(KrippendorffAlpha, TooFewPairableValues) {
  EXPECT_THROW(KrippendorffAlphaOrdinal(FromUnits({{3}, {2}})), DomainError);
  EXPECT_THROW(KrippendorffAlphaOrdinal(std::vector<std::vector<int>>{}), DomainError);
  EXPECT_THROW(KrippendorffAlphaOrdinal(std::vector<std::vector<int>>{{1, 7}}), DomainError);
}

TEST(KrippendorffAlpha, MatchesPairwiseOracleOnRandomData) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<int>> units(2 + rng() % 20);
    for (auto& u : units) {
      const std::size_t m = rng() % 6;
      const int center = static_cast<int>(rng() % 5);
      for (std::size_t i = 0; i < m; ++i)
        u.push_back(std::clamp(center + static_cast<int>(rng() % 3) - 1, 0, 4));
    }
    std::size_t pairable = 0;
    for (const auto& u : units)
      if (u.size() >= 2) pairable += u.size();
    if (pairable < 2) continue;
    const auto r = KrippendorffAlphaOrdinal(units);
    if (r.no_variation) continue;
    EXPECT_NEAR(r.alpha, PairwiseOrdinalAlpha(units), 1e-9) << "trial " << trial;

    // The matrix overload agrees, with missing cells padding short units.
    std::vector<std::vector<Rating>> as_ratings;
    for (const auto& u : units) as_ratings.emplace_back(u.begin(), u.end());
    EXPECT_NEAR(KrippendorffAlphaOrdinal(FromUnits(as_ratings)).alpha, r.alpha, 1e-12);
  }
}

TEST(KrippendorffAlpha, SinglePerturbationStrictlyDecreases) {
  std::mt19937_64 rng(5);
  std::vector<std::vector<Rating>> units;
  for (int p = 0; p < 12; ++p) units.push_back(std::vector<Rating>(10, p % 5));
  ASSERT_EQ(KrippendorffAlphaOrdinal(FromUnits(units)).alpha, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto perturbed = units;
    auto& cell = perturbed[rng() % 12][rng() % 10];
    cell = (*cell + 1 + static_cast<int>(rng() % 4)) % 5;
    EXPECT_LT(KrippendorffAlphaOrdinal(FromUnits(perturbed)).alpha, 1.0);
  }
}

TEST(KrippendorffAlpha, AnnotatorPermutationInvariant) {
  const auto data = LoadGoldCsv(testing::DataPath("gold_raw.csv"));
  ASSERT_TRUE(data.has_raw());
  const double base = KrippendorffAlphaOrdinal(*data.q1).alpha;
  auto m = *data.q1;
  std::reverse(m.ratings.begin(), m.ratings.end());
  EXPECT_NEAR(KrippendorffAlphaOrdinal(m).alpha, base, 1e-12);
}

double ClosedFormRho(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = FractionalRanks(x), ry = FractionalRanks(y);
  double d2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
  const double n = static_cast<double>(x.size());
  return 1 - 6 * d2 / (n * (n * n - 1));
}

TEST(SpearmanRho, Examples) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_NEAR(SpearmanRho(x, x), 1.0, 1e-12);
  const std::vector<double> rev{5, 4, 3, 2, 1};
  EXPECT_NEAR(SpearmanRho(x, rev), -1.0, 1e-12);
  const std::vector<double> y{2, 1, 4, 3, 5};
  EXPECT_NEAR(SpearmanRho(x, y), 0.8, 1e-12);
  EXPECT_NEAR(ClosedFormRho(x, y), 0.8, 1e-12);
}

TEST(SpearmanRho, TieFixture) {
  // Ranks x: 1 2.5 2.5 4 5.5 5.5, y: 2 1 3.5 3.5 6 5; both means 3.5.
  // Sxy = 14.25, Sxx = 16.5, Syy = 17.
  const std::vector<double> x{1, 2, 2, 3, 5, 5};
  const std::vector<double> y{2, 1, 3, 3, 6, 4};
  EXPECT_NEAR(SpearmanRho(x, y), 14.25 / std::sqrt(16.5 * 17.0), 1e-12);
  EXPECT_NEAR(SpearmanRho(x, y), 0.8508410434878082, 1e-12);
}

TEST(SpearmanRho, InvariantUnderIncreasingTransformAndAntisymmetric) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(3 + rng() % 20), y(x.size());
    for (double& v : x) v = static_cast<double>(rng() % 10);
    for (double& v : y) v = testing::Uniform(rng, -1, 1);
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) continue;
    const double rho = SpearmanRho(x, y);
    std::vector<double> tx = x, neg = y;
    for (double& v : tx) v = std::exp(v / 3) + 7;
    for (double& v : neg) v = -v;
    EXPECT_NEAR(SpearmanRho(tx, y), rho, 1e-12);
    EXPECT_NEAR(SpearmanRho(x, neg), -rho, 1e-12);
    EXPECT_NEAR(SpearmanRho(y, x), rho, 1e-12);
  }
}

TEST(SpearmanRho, ClosedFormOnTieFreePermutations) {
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<double> x(n), y(n);
    std::iota(x.begin(), x.end(), 1.0);
    std::iota(y.begin(), y.end(), 1.0);
    do {
      EXPECT_NEAR(SpearmanRho(x, y), ClosedFormRho(x, y), 1e-12);
    } while (std::next_permutation(y.begin(), y.end()));
  }
}

TEST(SpearmanRho, Errors) {
  const std::vector<double> a{1, 2, 3}, b{1, 2}, c{4, 4, 4};
  EXPECT_THROW(SpearmanRho(a, b), DomainError);
  EXPECT_THROW(SpearmanRho(a, c), DomainError);
  EXPECT_THROW(SpearmanRho(std::vector<double>{1}, std::vector<double>{1}), DomainError);
}

std::vector<GoldPair> FourGoldPairs() {
  return {{"U+1F3B5", "U+1F3B6", 4, 4, 4},
          {"U+1F602", "U+1F62D", 1, 3, 2},
          {"U+1F52B", "U+1F4A3", 1.5, 3.5, 2.5},
          {"U+1F52B", "U+1F3B5", 0, 0.5, 0.25}};
}

TEST(EvaluateModel, IncreasingFunctionOfGoldGivesHundred) {
  // Pair i: first emoji on the x axis, second at angle (4 - similarity).
  EmojiEmbeddingModel m(2, Regime::kSenseLabel, "fixture");
  std::vector<GoldPair> gold;
  for (int i = 0; i < 8; ++i) {
    const double sim = 0.4 * i + 0.1;
    const std::string a = "U+1F60" + std::to_string(i), b = "U+1F61" + std::to_string(i);
    m.Set(a, {1, 0});
    m.Set(b, {std::cos(0.35 * (4 - sim)), std::sin(0.35 * (4 - sim))});
    gold.push_back({a, b, sim, sim, sim});
  }
  const auto rep = EvaluateModel(m, gold);
  EXPECT_EQ(rep.n_evaluated, 8u);
  EXPECT_NEAR(*rep.rho_x100_similarity, 100.0, 1e-9);
  EXPECT_EQ(rep.regime, "label");
  EXPECT_EQ(rep.source_tag, "fixture");
}

TEST(EvaluateModel, ComposesSpearmanAndExcludesMissing) {
  EmojiEmbeddingModel m(3, Regime::kSenseDef, "fx");
  m.Set("U+1F3B5", {1, 0.2, 0});
  m.Set("U+1F3B6", {0.9, 0.3, 0.1});
  m.Set("U+1F602", {0.1, 1, 0});
  m.Set("U+1F62D", {-0.3, 1, 0.4});
  m.Set("U+1F52B", {0, -1, 1});
  auto gold = FourGoldPairs();
  gold.push_back({"U+1F44D", "U+1F602", 1, 1, 1});
  const auto rep = EvaluateModel(m, gold);
  EXPECT_EQ(rep.n_evaluated, 3u);
  EXPECT_EQ(rep.n_excluded, 2u);

  std::vector<double> scores, sim, q1, q2;
  for (const auto& g : gold) {
    if (!m.Contains(g.e1) || !m.Contains(g.e2)) continue;
    scores.push_back(Similarity(m, g.e1, g.e2));
    sim.push_back(g.similarity);
    q1.push_back(g.q1_mean);
    q2.push_back(g.q2_mean);
  }
  EXPECT_EQ(*rep.rho_x100_similarity, 100 * SpearmanRho(scores, sim));
  EXPECT_EQ(*rep.rho_x100_q1, 100 * SpearmanRho(scores, q1));
  EXPECT_EQ(*rep.rho_x100_q2, 100 * SpearmanRho(scores, q2));
}

TEST(EvaluateModel, UndefinedRhoAndTooFewPairs) {
  EmojiEmbeddingModel m(2, Regime::kSenseDesc, "fx");
  m.Set("U+1F3B5", {1, 0});
  m.Set("U+1F3B6", {0, 1});
  m.Set("U+1F602", {1, 1});
  const std::vector<GoldPair> constant = {{"U+1F3B5", "U+1F3B6", 2, 2, 2},
                                          {"U+1F3B5", "U+1F602", 2, 2, 2}};
  const auto rep = EvaluateModel(m, constant);
  EXPECT_FALSE(rep.rho_x100_similarity.has_value());
  EXPECT_THROW(EvaluateModel(m, {constant[0]}), DomainError);
}

TEST(LoadGoldCsv, RawFixture) {
  const auto data = LoadGoldCsv(testing::DataPath("gold_raw.csv"));
  ASSERT_TRUE(data.has_raw());
  EXPECT_EQ(data.pairs.size(), 14u);
  EXPECT_EQ(data.q1->annotators(), 10u);
  EXPECT_EQ(data.gold[0].e1, "U+1F3B5");
  EXPECT_EQ(data.gold[0].e2, "U+1F3B6");
  EXPECT_EQ(data.gold[0].similarity, 4.0);
  EXPECT_EQ(data.pairs[12].first, "U+1F468_U+200D_U+1F469_U+200D_U+1F466");
  for (const auto& g : data.gold) {
    EXPECT_GE(g.similarity, 0.0);
    EXPECT_LE(g.similarity, 4.0);
  }
}

TEST(LoadGoldCsv, AggregatedRoundTrip) {
  const auto raw = LoadGoldCsv(testing::DataPath("gold_raw.csv"));
  std::ostringstream out;
  WriteAggregatedGoldCsv(raw.gold, out);
  TempDir dir;
  const auto agg = LoadGoldCsv(dir.Write("agg.csv", out.str()));
  EXPECT_FALSE(agg.has_raw());
  ASSERT_EQ(agg.gold.size(), raw.gold.size());
  for (std::size_t i = 0; i < agg.gold.size(); ++i) {
    EXPECT_EQ(agg.gold[i].q1_mean, raw.gold[i].q1_mean);
    EXPECT_EQ(agg.gold[i].similarity, raw.gold[i].similarity);
  }
}

TEST(LoadGoldCsv, Errors) {
  TempDir dir;
  EXPECT_THROW(LoadGoldCsv(dir.Write("e.csv", "")), EmptyInputError);
  EXPECT_THROW(LoadGoldCsv(dir.Write("h.csv", "a,b,q1_mean,q2_mean\n")), ParseError);
  EXPECT_THROW(LoadGoldCsv(dir.Write("s.csv",
                                     "emoji1,emoji2,q1_mean,q2_mean,similarity\n"
                                     "U+1F602,U+1F62D,1,3,2.5\n")),
               ParseError);
  try {
    LoadGoldCsv(dir.Write("r.csv",
                          "emoji1,emoji2,q1_r1,q1_r2,q2_r1,q2_r2\n"
                          "U+1F602,U+1F62D,1,2,3,4\n"
                          "U+1F602,U+1F52B,1,9,3,4\n"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(LoadGoldCsv(dir.Write("c.csv",
                                     "emoji1,emoji2,q1_r1,q2_r1\n"
                                     "smile,U+1F62D,1,2\n")),
               ParseError);
}

}  // namespace
}  // namespace emosim
