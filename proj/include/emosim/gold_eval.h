#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "emosim/emoji_embedding.h"
#include "emosim/emoji_pair.h"

namespace emosim {

enum class Question { kQ1Equivalence, kQ2Relatedness };

inline constexpr int kMinRating = 0;
inline constexpr int kMaxRating = 4;
inline constexpr int kRatingLevels = kMaxRating - kMinRating + 1;

using Rating = std::optional<int>;

// Ordinal 0..4 ratings of one question, indexed [annotator][pair].
struct AnnotationMatrix {
  Question question = Question::kQ1Equivalence;
  std::vector<EmojiPair> pairs;
  std::vector<std::vector<Rating>> ratings;

  std::size_t annotators() const { return ratings.size(); }
  // Throws DomainError on ragged rows or ratings outside 0..4.
  void Validate() const;
};

struct GoldPair {
  std::string e1;
  std::string e2;
  double q1_mean = 0.0;
  double q2_mean = 0.0;
  double similarity = 0.0;  // (q1_mean + q2_mean) / 2
};

// Per-pair means over non-missing ratings. Throws DomainError when the pair
// lists differ or a pair has no rating on either question.
std::vector<GoldPair> AggregateGold(const AnnotationMatrix& q1,
                                    const AnnotationMatrix& q2);

// Counts of each rating value 0..4 for one pair.
std::array<std::size_t, kRatingLevels> RatingHistogram(const AnnotationMatrix& m,
                                                       std::size_t pair_index);

struct AgreementResult {
  double alpha = 1.0;
  double observed_disagreement = 0.0;
  double expected_disagreement = 0.0;
  std::size_t pairable_values = 0;  // n: values in units with >= 2 ratings
  std::size_t units_used = 0;
  // Every pairable value is identical, so expected disagreement is zero and
  // alpha is 1 by convention.
  bool no_variation = false;
};

// Krippendorff's alpha with the ordinal difference function, computed from
// the value coincidence matrix. Missing ratings are paired only within their
// unit; units with fewer than two ratings are ignored. Throws DomainError
// when fewer than two pairable values exist.
AgreementResult KrippendorffAlphaOrdinal(const AnnotationMatrix& m);

// Same computation over explicit units (each unit: the ratings given to one
// item, values in 0..num_levels-1).
AgreementResult KrippendorffAlphaOrdinal(const std::vector<std::vector<int>>& units,
                                         int num_levels = kRatingLevels);

double PearsonCorrelation(std::span<const double> x, std::span<const double> y);

// Pearson correlation of fractional (tie-averaged) ranks. Throws
// DomainError on length mismatch, fewer than 2 values, or a constant list.
double SpearmanRho(std::span<const double> x, std::span<const double> y);

struct EvaluationReport {
  std::string regime;
  std::string source_tag;
  std::size_t n_evaluated = 0;
  std::size_t n_excluded = 0;
  std::vector<ExcludedPair> excluded;
  // rho * 100; nullopt when undefined (one side constant).
  std::optional<double> rho_x100_similarity;
  std::optional<double> rho_x100_q1;
  std::optional<double> rho_x100_q2;
};

// Spearman's rho between model cosine scores and the gold scores over the
// pairs the model can resolve. Throws DomainError with < 2 evaluable pairs.
EvaluationReport EvaluateModel(const EmojiEmbeddingModel& model,
                               const std::vector<GoldPair>& gold);

// Gold CSV: header "emoji1,emoji2," followed by either raw columns
// q1_r1..q1_rN,q2_r1..q2_rN or aggregated q1_mean,q2_mean,similarity.
// Emoji cells are "U+..." ids or literal emoji.
struct GoldData {
  std::vector<EmojiPair> pairs;
  std::optional<AnnotationMatrix> q1;  // raw layout only
  std::optional<AnnotationMatrix> q2;
  std::vector<GoldPair> gold;          // always filled

  bool has_raw() const { return q1.has_value(); }
};

GoldData LoadGoldCsv(const std::string& path);
void WriteAggregatedGoldCsv(const std::vector<GoldPair>& gold, std::ostream& out);

}  // namespace emosim
