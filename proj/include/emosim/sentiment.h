#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emosim/corpus_pipeline.h"
#include "emosim/emoji_embedding.h"
#include "emosim/vector_store.h"

namespace emosim {

enum class SentimentLabel { kNegative = 0, kNeutral = 1, kPositive = 2 };
inline constexpr std::size_t kNumSentimentClasses = 3;

std::optional<SentimentLabel> ParseSentimentLabel(std::string_view s);
std::string_view ToString(SentimentLabel label);

struct SentimentExample {
  std::string text;
  SentimentLabel label = SentimentLabel::kNeutral;
  bool has_emoji = false;  // set by Featurizer::Annotate
};

// TSV "label<TAB>text"; labels negative / neutral / positive.
std::vector<SentimentExample> LoadSentimentTsv(const std::string& path);

struct FeatureVector {
  std::vector<double> values;
  std::size_t matched_tokens = 0;

  // All-OOV tweet: zero vector kept in the dataset.
  bool degenerate() const { return matched_tokens == 0; }
};

// Averages word vectors and emoji vectors over a tweet. Emoji spans are
// found with a matcher over the emoji model's ids plus any extra ids (an
// inventory), the rest of the text is tokenized and normalized like the
// definition corpora. Holds references to `words` and `emoji`.
class Featurizer {
 public:
  // Throws DimensionMismatchError when the word store and emoji model differ.
  Featurizer(const WordVectorStore& words, const EmojiEmbeddingModel& emoji,
             const std::vector<std::string>& extra_emoji_ids = {});

  std::size_t dimension() const { return words_.dimension(); }
  FeatureVector Featurize(std::string_view text) const;
  // Parallel over examples; output aligned with the input.
  std::vector<FeatureVector> FeaturizeAll(const std::vector<SentimentExample>& examples) const;
  std::vector<std::string> ExtractEmoji(std::string_view text) const;

  // Sets has_emoji on every example; returns each example's emoji in order.
  std::vector<std::vector<std::string>> Annotate(
      std::vector<SentimentExample>& examples) const;

 private:
  const WordVectorStore& words_;
  const EmojiEmbeddingModel& emoji_;
  EmojiMatcher matcher_;
};

FeatureVector Featurize(const SentimentExample& example, const WordVectorStore& words,
                        const EmojiEmbeddingModel& emoji);

struct TrainConfig {
  double l2 = 1e-3;
  std::size_t iterations = 500;
  double learning_rate = 0.1;
  std::uint64_t seed = 42;
};

// Multinomial logistic regression: one weight row (plus bias) per class.
class SoftmaxClassifier {
 public:
  // weights: kNumSentimentClasses rows of (dimension + 1), bias last.
  SoftmaxClassifier(std::size_t dimension, std::vector<double> weights);

  std::size_t dimension() const { return dimension_; }
  const std::vector<double>& weights() const { return weights_; }

  std::array<double, kNumSentimentClasses> Probabilities(std::span<const double> x) const;
  // argmax; ties go to the lower class index.
  SentimentLabel Predict(std::span<const double> x) const;

  std::string ToJson() const;
  static SoftmaxClassifier FromJson(std::string_view text,
                                    const std::string& source = "<classifier>");
  void Save(const std::string& path) const;
  static SoftmaxClassifier Load(const std::string& path);

 private:
  std::size_t dimension_;
  std::vector<double> weights_;
};

struct TrainResult {
  SoftmaxClassifier classifier;
  // Regularized mean cross-entropy before the first step and after each step.
  std::vector<double> loss_trace;
};

// Full-batch gradient descent with L2 penalty (bias unpenalized), weights
// initialised from `seed`. Deterministic for a given input and config.
// Throws DomainError when a class has no examples, features are ragged,
// or the loss becomes non-finite.
TrainResult TrainClassifier(const std::vector<FeatureVector>& features,
                            const std::vector<SentimentLabel>& labels,
                            const TrainConfig& config = {});

bool IsNonIncreasing(const std::vector<double>& trace);

struct SegmentResult {
  std::string name;
  std::size_t n = 0;
  std::size_t correct = 0;
  std::optional<double> accuracy;  // undefined for an empty segment
};

// Segments: all, with_emoji, frequent_emoji (only emoji from the set covering
// 90% of emoji occurrences), rare_emoji (the rest of with_emoji).
struct SplitReport {
  std::array<SegmentResult, 4> segments;
  std::vector<std::string> frequent_emoji;
  std::size_t emoji_occurrences = 0;
};

// Most frequent emoji, greedy by descending occurrence count (ties by id),
// until `coverage` of all occurrences is reached.
std::vector<std::string> FrequentEmojiSet(
    const std::vector<std::vector<std::string>>& emoji_per_example,
    double coverage = 0.9);

// Scores predictions from any source (the in-repo classifier or an
// external RF/SVM prediction file).
SplitReport EvaluatePredictions(const std::vector<SentimentExample>& test,
                                const std::vector<std::vector<std::string>>& emoji_per_example,
                                const std::vector<SentimentLabel>& predictions);

SplitReport EvaluateSplits(const SoftmaxClassifier& classifier,
                           std::vector<SentimentExample> test,
                           const Featurizer& featurizer);

// One label per line, aligned with the test file.
std::vector<SentimentLabel> LoadPredictions(const std::string& path);

}  // namespace emosim
