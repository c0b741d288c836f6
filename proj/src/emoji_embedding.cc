#include "emosim/emoji_embedding.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "emosim/error.h"
#include "emosim/numeric.h"
#include "emosim/parallel.h"
#include "emosim/ranking.h"
#include "text_io.h"

namespace emosim {

EmbeddingResult EmbedEmoji(const DefinitionCorpus& corpus,
                           const WordVectorStore& store) {
  EmbeddingResult result;
  result.coverage.total = corpus.tokens.size();
  VectorAccumulator acc(store.dimension());
  for (const auto& token : corpus.tokens)
    if (auto v = store.Lookup(token)) acc.Add(*v);
  result.coverage.matched = acc.count();
  if (acc.count() > 0) result.vector = acc.Mean();
  return result;
}

EmojiEmbeddingModel::EmojiEmbeddingModel(std::size_t dimension, Regime regime,
                                         std::string source_tag)
    : dimension_(dimension), regime_(regime), source_tag_(std::move(source_tag)) {
  if (dimension_ == 0) throw DomainError("model dimension must be positive");
}

void EmojiEmbeddingModel::Set(std::string emoji, std::vector<double> vector,
                              std::optional<Coverage> coverage) {
  if (vector.size() != dimension_) {
    throw DimensionMismatchError("vector for " + emoji + " has " +
                                 std::to_string(vector.size()) +
                                 " components, model dimension is " +
                                 std::to_string(dimension_));
  }
  for (double v : vector)
    if (!std::isfinite(v))
      throw DomainError("vector for " + emoji + " has a non-finite component");
  if (coverage) coverage_[emoji] = *coverage;
  vectors_[std::move(emoji)] = std::move(vector);
}

std::optional<std::span<const double>> EmojiEmbeddingModel::Find(
    std::string_view emoji) const {
  auto it = vectors_.find(emoji);
  if (it == vectors_.end()) return std::nullopt;
  return std::span<const double>(it->second);
}

BuildDiagnostics ExtendModel(EmojiEmbeddingModel& model,
                             const std::vector<EmojiRecord>& inventory,
                             const WordVectorStore& store) {
  if (store.dimension() != model.dimension()) {
    throw DimensionMismatchError(
        "word vectors have dimension " + std::to_string(store.dimension()) +
        " but the model has dimension " + std::to_string(model.dimension()));
  }
  BuildDiagnostics diag;
  diag.empty_inventory = inventory.empty();

  std::vector<DefinitionCorpus> corpora(inventory.size());
  std::vector<EmbeddingResult> results(inventory.size());
  ParallelFor(inventory.size(), [&](std::size_t i) {
    corpora[i] = ExtractCorpus(inventory[i], model.regime());
    results[i] = EmbedEmoji(corpora[i], store);
  });

  for (std::size_t i = 0; i < inventory.size(); ++i) {
    const std::string& id = inventory[i].id;
    if (corpora[i].is_empty()) diag.empty_corpus.push_back(id);
    if (!results[i].vector) {
      diag.dropped.push_back(id);
      continue;
    }
    model.Set(id, std::move(*results[i].vector), results[i].coverage);
  }
  return diag;
}

BuildResult BuildModel(const std::vector<EmojiRecord>& inventory, Regime regime,
                       const WordVectorStore& store) {
  EmojiEmbeddingModel model(store.dimension(), regime, store.source_tag());
  BuildDiagnostics diag = ExtendModel(model, inventory, store);
  return {std::move(model), std::move(diag)};
}

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw DimensionMismatchError("cosine of vectors with different lengths");
  const double na = Norm(a);
  const double nb = Norm(b);
  if (na == 0.0 || nb == 0.0) throw DomainError("cosine of a zero-norm vector");
  // Keep the product symmetric in (a, b) so sim(a,b) == sim(b,a) exactly.
  const double c = Dot(a, b) / (na * nb);
  return std::clamp(c, -1.0, 1.0);
}

double DotProductSimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw DimensionMismatchError("dot product of vectors with different lengths");
  return Dot(a, b);
}

double NegativeEuclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw DimensionMismatchError("distance between vectors with different lengths");
  ExactSum s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s.Add(d * d);
  }
  return -std::sqrt(s.Value());
}

namespace {

std::span<const double> Require(const EmojiEmbeddingModel& model,
                                std::string_view emoji) {
  auto v = model.Find(emoji);
  if (!v) throw UnknownEmojiError("emoji " + std::string(emoji) + " is not in the model");
  return *v;
}

}  // namespace

double Similarity(const EmojiEmbeddingModel& model, std::string_view e1,
                  std::string_view e2, const Comparator& cmp) {
  return cmp(Require(model, e1), Require(model, e2));
}

RankedPairs RankPairs(const EmojiEmbeddingModel& model,
                      const std::vector<EmojiPair>& pairs, const Comparator& cmp) {
  RankedPairs out;
  std::vector<double> scores;
  for (const auto& p : pairs) {
    auto a = model.Find(p.first);
    auto b = model.Find(p.second);
    if (!a || !b) {
      out.excluded.push_back({p, "emoji " + (a ? p.second : p.first) + " not in model"});
      continue;
    }
    try {
      const double s = cmp(*a, *b);
      out.ranked.push_back({p, s, 0.0});
      scores.push_back(s);
    } catch (const DomainError& e) {
      out.excluded.push_back({p, e.what()});
    }
  }
  const auto ranks = FractionalRanks(scores, RankOrder::kDescending);
  for (std::size_t i = 0; i < ranks.size(); ++i) out.ranked[i].rank = ranks[i];
  return out;
}

std::vector<std::pair<std::string, double>> Nearest(const EmojiEmbeddingModel& model,
                                                    std::string_view emoji,
                                                    std::size_t k,
                                                    const Comparator& cmp) {
  if (k == 0) throw DomainError("nearest: k must be at least 1");
  const auto query = Require(model, emoji);
  std::vector<std::pair<std::string, double>> scored;
  for (const auto& [id, vec] : model.vectors()) {
    if (id == emoji) continue;
    try {
      scored.emplace_back(id, cmp(query, vec));
    } catch (const DomainError&) {
      // zero-norm neighbours have no defined similarity
    }
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

std::string SerializeModel(const EmojiEmbeddingModel& model) {
  std::ostringstream out;
  out << model.size() << ' ' << model.dimension() << ' ' << ToString(model.regime())
      << ' ' << model.source_tag() << '\n';
  for (const auto& [id, vec] : model.vectors()) {
    out << id;
    for (double v : vec) out << ' ' << detail::FormatDouble(v);
    out << '\n';
  }
  return out.str();
}

void SaveModel(const EmojiEmbeddingModel& model, const std::string& path) {
  if (model.source_tag().empty() ||
      model.source_tag().find_first_of(" \t\r\n") != std::string::npos) {
    throw DomainError("model source tag must be a non-empty word: '" +
                      model.source_tag() + "'");
  }
  auto out = detail::OpenOutput(path);
  out << SerializeModel(model);
  if (!out) throw Error(path + ": write failed");
}

EmojiEmbeddingModel LoadModel(const std::string& path) {
  auto in = detail::OpenInput(path);
  std::string line;
  std::size_t line_no = 0;
  std::optional<EmojiEmbeddingModel> model;
  std::size_t declared = 0;
  std::vector<double> values;
  while (detail::ReadLine(in, line)) {
    ++line_no;
    const auto fields = detail::SplitWhitespace(line);
    if (fields.empty()) continue;
    if (!model) {
      std::size_t dim = 0;
      std::optional<Regime> regime;
      if (fields.size() != 4 || !detail::ParseSize(fields[0], declared) ||
          !detail::ParseSize(fields[1], dim) || dim == 0 ||
          !(regime = ParseRegime(fields[2]))) {
        throw ParseError(path, line_no,
                         "expected header '<count> <dimension> <regime> <source_tag>'");
      }
      model.emplace(dim, *regime, std::string(fields[3]));
      continue;
    }
    detail::ParseComponents(fields, model->dimension(), path, line_no, values);
    auto id = CanonicalEmojiId(fields[0]);
    if (!id) throw ParseError(path, line_no, "invalid emoji id '" + std::string(fields[0]) + "'");
    if (model->Contains(*id)) throw ParseError(path, line_no, "duplicate emoji id " + *id);
    model->Set(*id, values);
  }
  if (!model) throw EmptyInputError(path + ": model file is empty");
  if (model->size() != declared) {
    throw ParseError(path, 0,
                     "header declares " + std::to_string(declared) + " vectors, found " +
                         std::to_string(model->size()));
  }
  return std::move(*model);
}

}  // namespace emosim
