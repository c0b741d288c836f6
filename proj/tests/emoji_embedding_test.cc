#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "emosim/emoji_embedding.h"
#include "emosim/error.h"
#include "emosim/numeric.h"
#include "emosim/ranking.h"
#include "test_util.h"

namespace emosim {
namespace {

using testing::TempDir;

WordVectorStore ThreeTokenStore() {
  WordVectorStore store(3, "tiny");
  const double a[] = {1, 0, 0}, b[] = {0, 1, 0}, c[] = {0, 0, 2};
  store.Insert("a", a);
  store.Insert("b", b);
  store.Insert("c", c);
  return store;
}

DefinitionCorpus Corpus(std::vector<std::string> tokens) {
  return {"U+1F602", Regime::kSenseDesc, std::move(tokens)};
}

std::vector<double> Vec(std::span<const double> s) { return {s.begin(), s.end()}; }

TEST(EmbedEmoji, Examples) {
  const auto store = ThreeTokenStore();
  EXPECT_EQ(*EmbedEmoji(Corpus({"a", "b"}), store).vector, (std::vector<double>{0.5, 0.5, 0}));
  EXPECT_EQ(*EmbedEmoji(Corpus({"a", "a"}), store).vector, (std::vector<double>{1, 0, 0}));
  const auto r = EmbedEmoji(Corpus({"a", "zzz"}), store);
  EXPECT_EQ(*r.vector, (std::vector<double>{1, 0, 0}));
  EXPECT_EQ(r.coverage.matched, 1u);
  EXPECT_EQ(r.coverage.total, 2u);
}

TEST(EmbedEmoji, AllOovIsAbsent) {
  const auto r = EmbedEmoji(Corpus({"x", "y"}), ThreeTokenStore());
  EXPECT_FALSE(r.vector.has_value());
  EXPECT_EQ(r.coverage.matched, 0u);
  EXPECT_EQ(r.coverage.total, 2u);
  EXPECT_FALSE(EmbedEmoji(Corpus({}), ThreeTokenStore()).vector.has_value());
}

// Random stores and corpora: mean bound, naive oracle, permutation invariance.
TEST(EmbedEmoji, RandomizedProperties) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 1 + rng() % 16;
    WordVectorStore store(dim, "r");
    std::vector<std::vector<double>> vecs(20, std::vector<double>(dim));
    for (std::size_t w = 0; w < vecs.size(); ++w) {
      for (double& x : vecs[w]) x = testing::Uniform(rng, -1, 1);
      store.Insert("w" + std::to_string(w), vecs[w]);
    }
    std::vector<std::string> tokens;
    const std::size_t n = 1 + rng() % 100;
    for (std::size_t i = 0; i < n; ++i) tokens.push_back("w" + std::to_string(rng() % 25));
    const auto r = EmbedEmoji(Corpus(tokens), store);

    std::vector<double> sum(dim, 0.0), lo(dim, INFINITY), hi(dim, -INFINITY);
    std::size_t matched = 0;
    for (const auto& t : tokens) {
      const std::size_t w = std::stoul(t.substr(1));
      if (w >= vecs.size()) continue;
      ++matched;
      for (std::size_t d = 0; d < dim; ++d) {
        sum[d] += vecs[w][d];
        lo[d] = std::min(lo[d], vecs[w][d]);
        hi[d] = std::max(hi[d], vecs[w][d]);
      }
    }
    EXPECT_EQ(r.coverage.matched, matched);
    if (matched == 0) {
      EXPECT_FALSE(r.vector.has_value());
      continue;
    }
    for (std::size_t d = 0; d < dim; ++d) {
      const double naive = sum[d] / static_cast<double>(matched);
      EXPECT_NEAR((*r.vector)[d], naive, 1e-12);
      EXPECT_GE((*r.vector)[d], lo[d]);
      EXPECT_LE((*r.vector)[d], hi[d]);
    }
    auto shuffled = tokens;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(*EmbedEmoji(Corpus(shuffled), store).vector, *r.vector);
  }
}

std::vector<EmojiRecord> TwoEmojiInventory() {
  return ParseInventory(R"([
    {"unicode": "U+1F602", "description": "a a",
     "senses": [{"label": "b", "pos": "noun", "gloss": "c c c b"}]},
    {"unicode": "U+1F52B", "description": "zzz",
     "senses": [{"label": "qqq", "pos": "noun"}]},
    {"unicode": "U+1F3B5", "description": "b"}])");
}

TEST(BuildModel, ComposesEmbedEmoji) {
  const auto inv = TwoEmojiInventory();
  const auto store = ThreeTokenStore();
  for (Regime regime : kAllRegimes) {
    const auto built = BuildModel(inv, regime, store);
    EXPECT_EQ(built.model.regime(), regime);
    EXPECT_EQ(built.model.source_tag(), "tiny");
    for (const auto& rec : inv) {
      const auto expected = EmbedEmoji(ExtractCorpus(rec, regime), store);
      const auto got = built.model.Find(rec.id);
      ASSERT_EQ(got.has_value(), expected.vector.has_value()) << rec.id;
      if (got) EXPECT_EQ(Vec(*got), *expected.vector);
    }
  }
}

TEST(BuildModel, SenseAllIsMeanOfConcatenationNotOfRegimeMeans) {
  const auto inv = TwoEmojiInventory();
  const auto store = ThreeTokenStore();
  const auto all = BuildModel(inv, Regime::kSenseAll, store);
  // Tokens a a | b | c c c b: sum (2, 2, 6) over 7 tokens.
  const std::vector<double> concat_mean{2.0 / 7, 2.0 / 7, 6.0 / 7};
  EXPECT_EQ(Vec(*all.model.Find("U+1F602")), concat_mean);
  // Mean of the three regime vectors: ((1,0,0) + (0,1,0) + (0,0.5,1.5)) / 3.
  const std::vector<double> mean_of_means{1.0 / 3, 0.5, 0.5};
  EXPECT_NE(Vec(*all.model.Find("U+1F602")), mean_of_means);
}

TEST(BuildModel, ZeroCoverageEmojiDropped) {
  const auto built = BuildModel(TwoEmojiInventory(), Regime::kSenseDesc, ThreeTokenStore());
  EXPECT_FALSE(built.model.Contains("U+1F52B"));
  EXPECT_EQ(built.diagnostics.dropped, (std::vector<std::string>{"U+1F52B"}));
  EXPECT_EQ(built.model.coverage().at("U+1F602").matched, 2u);

  const auto def = BuildModel(TwoEmojiInventory(), Regime::kSenseDef, ThreeTokenStore());
  EXPECT_EQ(def.diagnostics.empty_corpus,
            (std::vector<std::string>{"U+1F52B", "U+1F3B5"}));
}

TEST(BuildModel, EmptyInventory) {
  const auto built = BuildModel({}, Regime::kSenseAll, ThreeTokenStore());
  EXPECT_EQ(built.model.size(), 0u);
  EXPECT_TRUE(built.diagnostics.empty_inventory);
}

TEST(ExtendModel, DimensionMismatch) {
  EmojiEmbeddingModel model(2, Regime::kSenseDesc, "m");
  EXPECT_THROW(ExtendModel(model, TwoEmojiInventory(), ThreeTokenStore()),
               DimensionMismatchError);
}

TEST(EmojiEmbeddingModel, SetValidation) {
  EmojiEmbeddingModel model(2, Regime::kSenseDesc, "m");
  EXPECT_THROW(model.Set("U+1F602", {1, 2, 3}), DimensionMismatchError);
  EXPECT_THROW(model.Set("U+1F602", {1, NAN}), DomainError);
  model.Set("U+1F602", {1, 2});
  EXPECT_TRUE(model.Contains("U+1F602"));
}

TEST(Similarity, Examples) {
  EmojiEmbeddingModel m(2, Regime::kSenseDesc, "m");
  m.Set("A", {1, 0});
  m.Set("B", {0, 1});
  m.Set("C", {1, 1});
  m.Set("D", {2, 2});
  m.Set("Z", {0, 0});
  EXPECT_NEAR(Similarity(m, "C", "C"), 1.0, 1e-12);
  EXPECT_EQ(Similarity(m, "A", "B"), 0.0);
  EXPECT_NEAR(Similarity(m, "C", "D"), 1.0, 1e-12);
  EXPECT_THROW(Similarity(m, "A", "Q"), UnknownEmojiError);
  EXPECT_THROW(Similarity(m, "A", "Z"), DomainError);
  EXPECT_EQ(Similarity(m, "A", "C", DotProductSimilarity), 1.0);
  EXPECT_NEAR(Similarity(m, "A", "B", NegativeEuclidean), -std::sqrt(2.0), 1e-15);
}

TEST(Similarity, CosineProperties) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t dim = 1 + rng() % 32;
    std::vector<double> a(dim), b(dim);
    for (double& x : a) x = testing::Uniform(rng, -10, 10);
    for (double& x : b) x = testing::Uniform(rng, -10, 10);
    const double c = testing::Uniform(rng, 1e-3, 1e3);
    std::vector<double> ca = a;
    for (double& x : ca) x *= c;
    const double ab = CosineSimilarity(a, b);
    EXPECT_EQ(ab, CosineSimilarity(b, a));
    EXPECT_NEAR(CosineSimilarity(a, a), 1.0, 1e-12);
    EXPECT_NEAR(CosineSimilarity(ca, b), ab, 1e-12);
    EXPECT_LE(std::abs(ab), 1.0);
  }
}

TEST(FractionalRanks, Examples) {
  const double scores[] = {0.9, 0.5, 0.5, 0.1};
  EXPECT_EQ(FractionalRanks(scores, RankOrder::kDescending),
            (std::vector<double>{1, 2.5, 2.5, 4}));
  const double equal[] = {3, 3, 3, 3, 3};
  EXPECT_EQ(FractionalRanks(equal), (std::vector<double>(5, 3.0)));
  EXPECT_TRUE(FractionalRanks(std::span<const double>{}).empty());
}

// Independent rank oracle: for each score, 1 + #strictly-greater + (#equal - 1) / 2.
std::vector<double> BruteForceDescendingRanks(const std::vector<double>& s) {
  std::vector<double> out;
  for (double x : s) {
    double greater = 0, equal = 0;
    for (double y : s) {
      greater += y > x;
      equal += y == x;
    }
    out.push_back(1 + greater + (equal - 1) / 2);
  }
  return out;
}

EmojiEmbeddingModel SixEmojiModel() {
  EmojiEmbeddingModel m(3, Regime::kSenseLabel, "six");
  m.Set("U+1F3B5", {1, 1, 0});
  m.Set("U+1F3B6", {1, 1, 0});
  m.Set("U+1F602", {0.2, 1, 0.1});
  m.Set("U+1F62D", {-0.5, 1, 0.3});
  m.Set("U+1F52B", {0, -1, 1});
  m.Set("U+1F525", {0.7, 0.1, 0.9});
  return m;
}

TEST(RankPairs, MatchesBruteForceOracleAndExcludesMissing) {
  const auto m = SixEmojiModel();
  const std::vector<EmojiPair> pairs = {
      CanonicalPair("U+1F3B5", "U+1F3B6"), CanonicalPair("U+1F602", "U+1F62D"),
      CanonicalPair("U+1F52B", "U+1F525"), CanonicalPair("U+1F602", "U+1F4A3"),
      CanonicalPair("U+1F3B5", "U+1F602"), CanonicalPair("U+1F3B6", "U+1F602")};
  const auto r = RankPairs(m, pairs);
  ASSERT_EQ(r.ranked.size(), 5u);
  ASSERT_EQ(r.excluded.size(), 1u);
  EXPECT_EQ(r.excluded[0].pair, CanonicalPair("U+1F602", "U+1F4A3"));
  std::vector<double> scores;
  for (const auto& rp : r.ranked) {
    EXPECT_EQ(rp.score, Similarity(m, rp.pair.first, rp.pair.second));
    scores.push_back(rp.score);
  }
  const auto oracle = BruteForceDescendingRanks(scores);
  for (std::size_t i = 0; i < r.ranked.size(); ++i) EXPECT_EQ(r.ranked[i].rank, oracle[i]);
  EXPECT_EQ(r.ranked[0].rank, 1.0);
  EXPECT_EQ(r.ranked[3].rank, r.ranked[4].rank);  // identical vectors tie
}

TEST(RankPairs, InvariantUnderIncreasingTransform) {
  const auto m = SixEmojiModel();
  std::vector<EmojiPair> pairs;
  for (const auto& [a, va] : m.vectors())
    for (const auto& [b, vb] : m.vectors())
      if (a < b) pairs.push_back({a, b});
  const auto base = RankPairs(m, pairs);
  const Comparator cubed = [](std::span<const double> a, std::span<const double> b) {
    const double c = CosineSimilarity(a, b);
    return 5 * c * c * c + 2;
  };
  const auto transformed = RankPairs(m, pairs, cubed);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    EXPECT_EQ(base.ranked[i].rank, transformed.ranked[i].rank);
}

TEST(Nearest, MatchesExhaustiveScan) {
  const auto m = SixEmojiModel();
  for (const auto& [query, qv] : m.vectors()) {
    std::vector<std::pair<std::string, double>> oracle;
    for (const auto& [id, v] : m.vectors())
      if (id != query) oracle.emplace_back(id, CosineSimilarity(qv, v));
    std::stable_sort(oracle.begin(), oracle.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    EXPECT_EQ(Nearest(m, query, 100), oracle) << query;
    EXPECT_EQ(Nearest(m, query, 2), std::vector(oracle.begin(), oracle.begin() + 2));
  }
  const auto top = Nearest(m, "U+1F3B5", 1);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(top[0].first, "U+1F3B6");
  EXPECT_NEAR(top[0].second, 1.0, 1e-12);
  EXPECT_THROW(Nearest(m, "U+1F3B5", 0), DomainError);
  EXPECT_THROW(Nearest(m, "U+1F4A3", 3), UnknownEmojiError);
}

TEST(ModelFile, RoundTripIsBitExact) {
  std::mt19937_64 rng(17);
  EmojiEmbeddingModel m(5, Regime::kSenseDef, "google-news");
  for (const char* id : {"U+1F602", "U+1F468_U+200D_U+1F469", "U+2764"}) {
    std::vector<double> v(5);
    for (double& x : v) x = testing::Uniform(rng, -1, 1) * std::pow(10.0, rng() % 20 - 10.0);
    m.Set(id, v);
  }
  TempDir dir;
  const auto path = dir.Path("m.txt");
  SaveModel(m, path);
  const auto loaded = LoadModel(path);
  EXPECT_EQ(loaded.dimension(), 5u);
  EXPECT_EQ(loaded.regime(), Regime::kSenseDef);
  EXPECT_EQ(loaded.source_tag(), "google-news");
  EXPECT_EQ(loaded.vectors(), m.vectors());
  EXPECT_EQ(SerializeModel(loaded), SerializeModel(m));
}

TEST(ModelFile, Errors) {
  TempDir dir;
  EXPECT_THROW(LoadModel(dir.Write("e.txt", "")), EmptyInputError);
  EXPECT_THROW(LoadModel(dir.Write("a.txt", "1 2 bogus t\nU+1F602 1 2\n")), ParseError);
  EXPECT_THROW(LoadModel(dir.Write("b.txt", "2 2 desc t\nU+1F602 1 2\n")), ParseError);
  EXPECT_THROW(LoadModel(dir.Write("c.txt", "1 2 desc t\nU+1F602 1\n")), ParseError);
  EXPECT_THROW(LoadModel(dir.Write("d.txt", "2 2 desc t\nU+1F602 1 2\nU+1F602 1 2\n")),
               ParseError);
  EXPECT_THROW(LoadModel(dir.Write("f.txt", "1 2 desc t\nsmile 1 2\n")), ParseError);
  EmojiEmbeddingModel bad_tag(2, Regime::kSenseDesc, "two words");
  EXPECT_THROW(SaveModel(bad_tag, dir.Path("x.txt")), DomainError);
}

}  // namespace
}  // namespace emosim
