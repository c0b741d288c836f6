#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "emosim/emoji_pair.h"
#include "emosim/sense_inventory.h"
#include "emosim/vector_store.h"

namespace emosim {

struct Coverage {
  std::size_t matched = 0;
  std::size_t total = 0;
};

struct EmbeddingResult {
  std::optional<std::vector<double>> vector;  // absent when nothing matched
  Coverage coverage;
};

// Mean of the word vectors of every corpus token found in the store.
// Out-of-vocabulary tokens are skipped and do not count towards p.
// Uses exact (correctly rounded) summation, so token order never matters.
EmbeddingResult EmbedEmoji(const DefinitionCorpus& corpus,
                           const WordVectorStore& store);

class EmojiEmbeddingModel {
 public:
  EmojiEmbeddingModel(std::size_t dimension, Regime regime, std::string source_tag);

  std::size_t dimension() const { return dimension_; }
  Regime regime() const { return regime_; }
  const std::string& source_tag() const { return source_tag_; }
  std::size_t size() const { return vectors_.size(); }

  // Throws DimensionMismatchError, or DomainError for non-finite values.
  void Set(std::string emoji, std::vector<double> vector,
           std::optional<Coverage> coverage = std::nullopt);

  std::optional<std::span<const double>> Find(std::string_view emoji) const;
  bool Contains(std::string_view emoji) const { return Find(emoji).has_value(); }

  // Sorted by emoji id.
  const std::map<std::string, std::vector<double>, std::less<>>& vectors() const {
    return vectors_;
  }
  const std::map<std::string, Coverage, std::less<>>& coverage() const {
    return coverage_;
  }

 private:
  std::size_t dimension_;
  Regime regime_;
  std::string source_tag_;
  std::map<std::string, std::vector<double>, std::less<>> vectors_;
  std::map<std::string, Coverage, std::less<>> coverage_;
};

struct BuildDiagnostics {
  std::vector<std::string> dropped;  // emoji with zero matched tokens
  std::vector<std::string> empty_corpus;
  bool empty_inventory = false;
};

struct BuildResult {
  EmojiEmbeddingModel model;
  BuildDiagnostics diagnostics;
};

// One regime over one word-vector store. Emoji are embedded in parallel.
BuildResult BuildModel(const std::vector<EmojiRecord>& inventory, Regime regime,
                       const WordVectorStore& store);

// Adds (or replaces) the embeddings of `inventory` in an existing model.
// Throws DimensionMismatchError when the store does not match the model.
BuildDiagnostics ExtendModel(EmojiEmbeddingModel& model,
                             const std::vector<EmojiRecord>& inventory,
                             const WordVectorStore& store);

using Comparator =
    std::function<double(std::span<const double>, std::span<const double>)>;

// Throws DomainError when either vector has zero norm.
double CosineSimilarity(std::span<const double> a, std::span<const double> b);
double DotProductSimilarity(std::span<const double> a, std::span<const double> b);
// -||a - b||, so larger still means more similar.
double NegativeEuclidean(std::span<const double> a, std::span<const double> b);

// Throws UnknownEmojiError for ids not in the model.
double Similarity(const EmojiEmbeddingModel& model, std::string_view e1,
                  std::string_view e2, const Comparator& cmp = CosineSimilarity);

struct RankedPair {
  EmojiPair pair;
  double score = 0.0;
  double rank = 0.0;  // descending-score fractional rank
};

struct ExcludedPair {
  EmojiPair pair;
  std::string reason;
};

struct RankedPairs {
  std::vector<RankedPair> ranked;  // input order
  std::vector<ExcludedPair> excluded;
};

RankedPairs RankPairs(const EmojiEmbeddingModel& model,
                      const std::vector<EmojiPair>& pairs,
                      const Comparator& cmp = CosineSimilarity);

// Top-k other emoji by similarity, descending; ties broken by id.
std::vector<std::pair<std::string, double>> Nearest(
    const EmojiEmbeddingModel& model, std::string_view emoji, std::size_t k,
    const Comparator& cmp = CosineSimilarity);

// Text format: "<count> <dimension> <regime> <source_tag>" then one
// "<emoji-id> <v1> ... <vk>" line per emoji, components written with the
// shortest round-tripping representation.
void SaveModel(const EmojiEmbeddingModel& model, const std::string& path);
std::string SerializeModel(const EmojiEmbeddingModel& model);
EmojiEmbeddingModel LoadModel(const std::string& path);

}  // namespace emosim
