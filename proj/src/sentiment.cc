#include "emosim/sentiment.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <json.hpp>

#include "emosim/error.h"
#include "emosim/numeric.h"
#include "emosim/parallel.h"
#include "text_io.h"

namespace emosim {

std::optional<SentimentLabel> ParseSentimentLabel(std::string_view s) {
  s = detail::Trim(s);
  if (s == "negative") return SentimentLabel::kNegative;
  if (s == "neutral") return SentimentLabel::kNeutral;
  if (s == "positive") return SentimentLabel::kPositive;
  return std::nullopt;
}

std::string_view ToString(SentimentLabel label) {
  switch (label) {
    case SentimentLabel::kNegative: return "negative";
    case SentimentLabel::kNeutral: return "neutral";
    case SentimentLabel::kPositive: return "positive";
  }
  return "neutral";
}

std::vector<SentimentExample> LoadSentimentTsv(const std::string& path) {
  auto in = detail::OpenInput(path);
  std::vector<SentimentExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (detail::ReadLine(in, line)) {
    ++line_no;
    if (detail::Trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(path, line_no, "expected 'label<TAB>text'");
    auto label = ParseSentimentLabel(std::string_view(line).substr(0, tab));
    if (!label) {
      throw ParseError(path, line_no,
                       "unknown label '" + line.substr(0, tab) +
                           "' (expected negative, neutral or positive)");
    }
    out.push_back({line.substr(tab + 1), *label, false});
  }
  return out;
}

namespace {

std::vector<std::string> WithExtra(const EmojiEmbeddingModel& model,
                                   const std::vector<std::string>& extra) {
  std::vector<std::string> ids;
  for (const auto& [id, v] : model.vectors()) ids.push_back(id);
  ids.insert(ids.end(), extra.begin(), extra.end());
  return ids;
}

}  // namespace

Featurizer::Featurizer(const WordVectorStore& words, const EmojiEmbeddingModel& emoji,
                       const std::vector<std::string>& extra_emoji_ids)
    : words_(words), emoji_(emoji), matcher_(WithExtra(emoji, extra_emoji_ids)) {
  if (words.dimension() != emoji.dimension()) {
    throw DimensionMismatchError("word vectors have dimension " +
                                 std::to_string(words.dimension()) +
                                 ", emoji model has " + std::to_string(emoji.dimension()));
  }
}

FeatureVector Featurizer::Featurize(std::string_view text) const {
  const CodepointSeq cps = DecodeUtf8(text);
  VectorAccumulator acc(dimension());
  auto add_words = [&](std::size_t begin, std::size_t end) {
    if (begin >= end) return;
    CodepointSeq piece(cps.begin() + begin, cps.begin() + end);
    for (const auto& tok : TokenizeAndNormalize(EncodeUtf8(piece)))
      if (auto v = words_.Lookup(tok)) acc.Add(*v);
  };
  std::size_t pos = 0;
  for (const auto& m : matcher_.Scan(cps)) {
    add_words(pos, m.begin);
    if (auto v = emoji_.Find(m.id)) acc.Add(*v);
    pos = m.end;
  }
  add_words(pos, cps.size());

  FeatureVector f;
  f.matched_tokens = acc.count();
  f.values = acc.count() > 0 ? acc.Mean() : std::vector<double>(dimension(), 0.0);
  return f;
}

std::vector<FeatureVector> Featurizer::FeaturizeAll(
    const std::vector<SentimentExample>& examples) const {
  std::vector<FeatureVector> out(examples.size());
  ParallelFor(examples.size(), [&](std::size_t i) { out[i] = Featurize(examples[i].text); });
  return out;
}

std::vector<std::string> Featurizer::ExtractEmoji(std::string_view text) const {
  return emosim::ExtractEmoji(text, matcher_).emoji;
}

std::vector<std::vector<std::string>> Featurizer::Annotate(
    std::vector<SentimentExample>& examples) const {
  std::vector<std::vector<std::string>> out;
  out.reserve(examples.size());
  for (auto& ex : examples) {
    out.push_back(ExtractEmoji(ex.text));
    ex.has_emoji = !out.back().empty();
  }
  return out;
}

FeatureVector Featurize(const SentimentExample& example, const WordVectorStore& words,
                        const EmojiEmbeddingModel& emoji) {
  return Featurizer(words, emoji).Featurize(example.text);
}

SoftmaxClassifier::SoftmaxClassifier(std::size_t dimension, std::vector<double> weights)
    : dimension_(dimension), weights_(std::move(weights)) {
  if (weights_.size() != kNumSentimentClasses * (dimension_ + 1)) {
    throw DimensionMismatchError("classifier expects " +
                                 std::to_string(kNumSentimentClasses * (dimension_ + 1)) +
                                 " weights, got " + std::to_string(weights_.size()));
  }
}

namespace {

using Logits = std::array<double, kNumSentimentClasses>;

Logits ComputeLogits(const std::vector<double>& w, std::size_t dim,
                     std::span<const double> x) {
  Logits z{};
  const std::size_t stride = dim + 1;
  for (std::size_t c = 0; c < kNumSentimentClasses; ++c) {
    const double* row = w.data() + c * stride;
    double s = row[dim];
    for (std::size_t j = 0; j < dim; ++j) s += row[j] * x[j];
    z[c] = s;
  }
  return z;
}

// Softmax in place; returns log-sum-exp of the input.
double Softmax(Logits& z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return m + std::log(sum);
}

}  // namespace

std::array<double, kNumSentimentClasses> SoftmaxClassifier::Probabilities(
    std::span<const double> x) const {
  if (x.size() != dimension_)
    throw DimensionMismatchError("feature dimension does not match the classifier");
  Logits z = ComputeLogits(weights_, dimension_, x);
  Softmax(z);
  return z;
}

SentimentLabel SoftmaxClassifier::Predict(std::span<const double> x) const {
  if (x.size() != dimension_)
    throw DimensionMismatchError("feature dimension does not match the classifier");
  const Logits z = ComputeLogits(weights_, dimension_, x);
  return static_cast<SentimentLabel>(std::max_element(z.begin(), z.end()) - z.begin());
}

std::string SoftmaxClassifier::ToJson() const {
  nlohmann::ordered_json j;
  j["type"] = "softmax";
  j["classes"] = {"negative", "neutral", "positive"};
  j["dimension"] = dimension_;
  j["weights"] = weights_;
  return j.dump(2) + "\n";
}

SoftmaxClassifier SoftmaxClassifier::FromJson(std::string_view text,
                                              const std::string& source) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError(source, 0, "malformed classifier JSON");
  try {
    if (j.at("type").get<std::string>() != "softmax")
      throw ParseError(source, 0, "unsupported classifier type");
    return SoftmaxClassifier(j.at("dimension").get<std::size_t>(),
                             j.at("weights").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source, 0, std::string("bad classifier JSON: ") + e.what());
  }
}

void SoftmaxClassifier::Save(const std::string& path) const {
  auto out = detail::OpenOutput(path);
  out << ToJson();
  if (!out) throw Error(path + ": write failed");
}

SoftmaxClassifier SoftmaxClassifier::Load(const std::string& path) {
  auto in = detail::OpenInput(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return FromJson(text, path);
}

TrainResult TrainClassifier(const std::vector<FeatureVector>& features,
                            const std::vector<SentimentLabel>& labels,
                            const TrainConfig& config) {
  if (features.size() != labels.size())
    throw DomainError("features and labels have different lengths");
  if (features.empty()) throw DomainError("empty training set");
  const std::size_t dim = features.front().values.size();
  std::array<std::size_t, kNumSentimentClasses> per_class{};
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].values.size() != dim)
      throw DimensionMismatchError("training features have inconsistent dimensions");
    ++per_class[static_cast<std::size_t>(labels[i])];
  }
  for (std::size_t c = 0; c < kNumSentimentClasses; ++c) {
    if (per_class[c] == 0) {
      throw DomainError("class '" + std::string(ToString(static_cast<SentimentLabel>(c))) +
                        "' has no training examples");
    }
  }

  const std::size_t stride = dim + 1;
  std::vector<double> w(kNumSentimentClasses * stride);
  std::mt19937_64 rng(config.seed);
  for (double& v : w) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
    v = (u - 0.5) * 0.02;
  }

  const double n = static_cast<double>(features.size());
  std::vector<ExactSum> grad(w.size());
  std::vector<double> trace;
  trace.reserve(config.iterations + 1);
  for (std::size_t it = 0;; ++it) {
    ExactSum data_loss;
    for (auto& g : grad) g.Clear();
    for (std::size_t i = 0; i < features.size(); ++i) {
      const auto& x = features[i].values;
      const std::size_t y = static_cast<std::size_t>(labels[i]);
      Logits z = ComputeLogits(w, dim, x);
      const double target_logit = z[y];
      data_loss.Add(Softmax(z) - target_logit);
      for (std::size_t c = 0; c < kNumSentimentClasses; ++c) {
        const double r = z[c] - (c == y ? 1.0 : 0.0);
        for (std::size_t j = 0; j < dim; ++j) grad[c * stride + j].Add(r * x[j]);
        grad[c * stride + dim].Add(r);
      }
    }
    ExactSum penalty;
    for (std::size_t c = 0; c < kNumSentimentClasses; ++c)
      for (std::size_t j = 0; j < dim; ++j) penalty.Add(w[c * stride + j] * w[c * stride + j]);
    const double loss = data_loss.Value() / n + 0.5 * config.l2 * penalty.Value();
    if (!std::isfinite(loss)) {
      throw DomainError("training loss became non-finite at iteration " +
                        std::to_string(it) + "; the learning rate is likely too large");
    }
    trace.push_back(loss);
    if (it == config.iterations) break;

    for (std::size_t c = 0; c < kNumSentimentClasses; ++c) {
      for (std::size_t j = 0; j <= dim; ++j) {
        const std::size_t k = c * stride + j;
        double g = grad[k].Value() / n;
        if (j < dim) g += config.l2 * w[k];
        w[k] -= config.learning_rate * g;
      }
    }
  }
  return {SoftmaxClassifier(dim, std::move(w)), std::move(trace)};
}

bool IsNonIncreasing(const std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (trace[i] > trace[i - 1]) return false;
  return true;
}

std::vector<std::string> FrequentEmojiSet(
    const std::vector<std::vector<std::string>>& emoji_per_example, double coverage) {
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;
  for (const auto& list : emoji_per_example) {
    for (const auto& e : list) ++counts[e];
    total += list.size();
  }
  std::vector<std::pair<std::string, std::size_t>> sorted(counts.begin(), counts.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  const double threshold = coverage * static_cast<double>(total);
  std::size_t cumulative = 0;
  for (const auto& [id, c] : sorted) {
    if (static_cast<double>(cumulative) >= threshold) break;
    out.push_back(id);
    cumulative += c;
  }
  return out;
}

SplitReport EvaluatePredictions(const std::vector<SentimentExample>& test,
                                const std::vector<std::vector<std::string>>& emoji_per_example,
                                const std::vector<SentimentLabel>& predictions) {
  if (test.empty()) throw DomainError("empty test set");
  if (predictions.size() != test.size() || emoji_per_example.size() != test.size()) {
    throw DomainError("predictions (" + std::to_string(predictions.size()) +
                      ") do not align with the test set (" + std::to_string(test.size()) + ")");
  }
  SplitReport rep;
  const char* names[] = {"all", "with_emoji", "frequent_emoji", "rare_emoji"};
  for (std::size_t i = 0; i < rep.segments.size(); ++i) rep.segments[i].name = names[i];
  rep.frequent_emoji = FrequentEmojiSet(emoji_per_example, 0.9);
  for (const auto& l : emoji_per_example) rep.emoji_occurrences += l.size();
  std::vector<std::string> frequent = rep.frequent_emoji;
  std::sort(frequent.begin(), frequent.end());

  auto tally = [](SegmentResult& s, bool ok) {
    ++s.n;
    if (ok) ++s.correct;
  };
  for (std::size_t i = 0; i < test.size(); ++i) {
    const bool ok = predictions[i] == test[i].label;
    tally(rep.segments[0], ok);
    const auto& emoji = emoji_per_example[i];
    if (emoji.empty()) continue;
    tally(rep.segments[1], ok);
    const bool all_frequent = std::all_of(emoji.begin(), emoji.end(), [&](const auto& e) {
      return std::binary_search(frequent.begin(), frequent.end(), e);
    });
    tally(rep.segments[all_frequent ? 2 : 3], ok);
  }
  for (auto& s : rep.segments)
    if (s.n > 0) s.accuracy = static_cast<double>(s.correct) / static_cast<double>(s.n);
  return rep;
}

SplitReport EvaluateSplits(const SoftmaxClassifier& classifier,
                           std::vector<SentimentExample> test,
                           const Featurizer& featurizer) {
  const auto emoji = featurizer.Annotate(test);
  std::vector<SentimentLabel> predictions(test.size());
  ParallelFor(test.size(), [&](std::size_t i) {
    predictions[i] = classifier.Predict(featurizer.Featurize(test[i].text).values);
  });
  return EvaluatePredictions(test, emoji, predictions);
}

std::vector<SentimentLabel> LoadPredictions(const std::string& path) {
  auto in = detail::OpenInput(path);
  std::vector<SentimentLabel> out;
  std::string line;
  std::size_t line_no = 0;
  while (detail::ReadLine(in, line)) {
    ++line_no;
    if (detail::Trim(line).empty()) continue;
    auto label = ParseSentimentLabel(line);
    if (!label) throw ParseError(path, line_no, "unknown label '" + line + "'");
    out.push_back(*label);
  }
  return out;
}

}  // namespace emosim
