#include "emosim/gold_eval.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "emosim/error.h"
#include "emosim/numeric.h"
#include "emosim/ranking.h"
#include "emosim/unicode.h"
#include "text_io.h"

namespace emosim {

void AnnotationMatrix::Validate() const {
  for (std::size_t a = 0; a < ratings.size(); ++a) {
    if (ratings[a].size() != pairs.size()) {
      throw DomainError("annotator " + std::to_string(a + 1) + " has " +
                        std::to_string(ratings[a].size()) + " ratings for " +
                        std::to_string(pairs.size()) + " pairs");
    }
    for (const Rating& r : ratings[a]) {
      if (r && (*r < kMinRating || *r > kMaxRating))
        throw DomainError("rating " + std::to_string(*r) + " outside 0..4");
    }
  }
}

namespace {

std::optional<double> PairMean(const AnnotationMatrix& m, std::size_t p) {
  ExactSum sum;
  std::size_t n = 0;
  for (const auto& row : m.ratings) {
    if (row[p]) {
      sum.Add(*row[p]);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum.Value() / static_cast<double>(n);
}

}  // namespace

std::vector<GoldPair> AggregateGold(const AnnotationMatrix& q1,
                                    const AnnotationMatrix& q2) {
  q1.Validate();
  q2.Validate();
  if (q1.pairs != q2.pairs)
    throw DomainError("Q1 and Q2 annotation matrices cover different pair lists");
  std::vector<GoldPair> out;
  out.reserve(q1.pairs.size());
  for (std::size_t p = 0; p < q1.pairs.size(); ++p) {
    auto m1 = PairMean(q1, p);
    auto m2 = PairMean(q2, p);
    if (!m1 || !m2) {
      throw DomainError("pair " + q1.pairs[p].first + "," + q1.pairs[p].second +
                        " has no ratings for " + (m1 ? "Q2" : "Q1"));
    }
    out.push_back({q1.pairs[p].first, q1.pairs[p].second, *m1, *m2, (*m1 + *m2) / 2.0});
  }
  return out;
}

std::array<std::size_t, kRatingLevels> RatingHistogram(const AnnotationMatrix& m,
                                                       std::size_t pair_index) {
  std::array<std::size_t, kRatingLevels> h{};
  for (const auto& row : m.ratings) {
    const Rating& r = row.at(pair_index);
    if (r && *r >= kMinRating && *r <= kMaxRating) ++h[*r - kMinRating];
  }
  return h;
}

AgreementResult KrippendorffAlphaOrdinal(const std::vector<std::vector<int>>& units,
                                         int num_levels) {
  const auto L = static_cast<std::size_t>(num_levels);
  // Coincidence matrix: each unit with m values adds 1/(m-1) per ordered
  // pair of values from different raters.
  std::vector<std::vector<double>> o(L, std::vector<double>(L, 0.0));
  AgreementResult res;
  std::vector<double> unit_counts(L);
  for (const auto& unit : units) {
    if (unit.size() < 2) continue;
    std::fill(unit_counts.begin(), unit_counts.end(), 0.0);
    for (int v : unit) {
      if (v < 0 || v >= num_levels)
        throw DomainError("rating " + std::to_string(v) + " outside the scale");
      unit_counts[v] += 1.0;
    }
    const double w = 1.0 / static_cast<double>(unit.size() - 1);
    for (std::size_t c = 0; c < L; ++c) {
      if (unit_counts[c] == 0.0) continue;
      for (std::size_t k = 0; k < L; ++k) {
        const double pairs = c == k ? unit_counts[c] * (unit_counts[c] - 1.0)
                                    : unit_counts[c] * unit_counts[k];
        o[c][k] += pairs * w;
      }
    }
    res.pairable_values += unit.size();
    ++res.units_used;
  }
  if (res.pairable_values < 2)
    throw DomainError("Krippendorff's alpha needs at least two pairable values");

  std::vector<double> n_c(L, 0.0);
  for (std::size_t c = 0; c < L; ++c)
    for (std::size_t k = 0; k < L; ++k) n_c[c] += o[c][k];
  const double n = static_cast<double>(res.pairable_values);

  // Ordinal metric: delta^2(c,k) = (sum_{g=c..k} n_g - (n_c + n_k)/2)^2.
  auto delta2 = [&](std::size_t c, std::size_t k) {
    if (c > k) std::swap(c, k);
    double s = 0.0;
    for (std::size_t g = c; g <= k; ++g) s += n_c[g];
    const double d = s - (n_c[c] + n_c[k]) / 2.0;
    return d * d;
  };

  ExactSum observed, expected;
  for (std::size_t c = 0; c < L; ++c) {
    for (std::size_t k = 0; k < L; ++k) {
      if (c == k) continue;
      const double d2 = delta2(c, k);
      observed.Add(o[c][k] * d2);
      expected.Add(n_c[c] * n_c[k] * d2);
    }
  }
  res.observed_disagreement = observed.Value() / n;
  res.expected_disagreement = expected.Value() / (n * (n - 1.0));
  if (res.expected_disagreement == 0.0) {
    res.no_variation = true;
    res.alpha = 1.0;
    return res;
  }
  res.alpha = 1.0 - res.observed_disagreement / res.expected_disagreement;
  return res;
}

AgreementResult KrippendorffAlphaOrdinal(const AnnotationMatrix& m) {
  m.Validate();
  std::vector<std::vector<int>> units(m.pairs.size());
  for (const auto& row : m.ratings)
    for (std::size_t p = 0; p < row.size(); ++p)
      if (row[p]) units[p].push_back(*row[p] - kMinRating);
  return KrippendorffAlphaOrdinal(units, kRatingLevels);
}

double PearsonCorrelation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw DomainError("correlation of lists with different lengths");
  if (x.size() < 2) throw DomainError("correlation needs at least two values");
  const double n = static_cast<double>(x.size());
  ExactSum sx, sy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx.Add(x[i]);
    sy.Add(y[i]);
  }
  const double mx = sx.Value() / n;
  const double my = sy.Value() / n;
  ExactSum sxy, sxx, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy.Add(dx * dy);
    sxx.Add(dx * dx);
    syy.Add(dy * dy);
  }
  if (sxx.Value() == 0.0 || syy.Value() == 0.0)
    throw DomainError("correlation of a constant list is undefined");
  const double r = sxy.Value() / std::sqrt(sxx.Value() * syy.Value());
  return std::clamp(r, -1.0, 1.0);
}

double SpearmanRho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw DomainError("spearman: lists have different lengths");
  if (x.size() < 2) throw DomainError("spearman: need at least two values");
  const auto rx = FractionalRanks(x);
  const auto ry = FractionalRanks(y);
  return PearsonCorrelation(rx, ry);
}

namespace {

std::optional<double> RhoX100(std::span<const double> a, std::span<const double> b) {
  try {
    return 100.0 * SpearmanRho(a, b);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace

EvaluationReport EvaluateModel(const EmojiEmbeddingModel& model,
                               const std::vector<GoldPair>& gold) {
  EvaluationReport rep;
  rep.regime = std::string(ToString(model.regime()));
  rep.source_tag = model.source_tag();
  std::vector<double> scores, sim, q1, q2;
  for (const auto& g : gold) {
    EmojiPair pair{g.e1, g.e2};
    auto a = model.Find(g.e1);
    auto b = model.Find(g.e2);
    if (!a || !b) {
      rep.excluded.push_back({pair, "emoji " + (a ? g.e2 : g.e1) + " not in model"});
      continue;
    }
    try {
      scores.push_back(CosineSimilarity(*a, *b));
    } catch (const DomainError& e) {
      rep.excluded.push_back({pair, e.what()});
      continue;
    }
    sim.push_back(g.similarity);
    q1.push_back(g.q1_mean);
    q2.push_back(g.q2_mean);
  }
  rep.n_evaluated = scores.size();
  rep.n_excluded = rep.excluded.size();
  if (rep.n_evaluated < 2) {
    throw DomainError("only " + std::to_string(rep.n_evaluated) +
                      " gold pairs are resolvable in the model; need at least 2");
  }
  rep.rho_x100_similarity = RhoX100(scores, sim);
  rep.rho_x100_q1 = RhoX100(scores, q1);
  rep.rho_x100_q2 = RhoX100(scores, q2);
  return rep;
}

namespace {

std::string_view Unquote(std::string_view s) {
  s = detail::Trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

bool IsMissing(std::string_view s) {
  return s.empty() || s == "NA" || s == "na" || s == "NaN" || s == "-";
}

// "q1_r7" -> (1, 7)
std::optional<std::pair<int, int>> RawColumn(std::string_view name) {
  if (name.size() < 5 || name[0] != 'q' || (name[1] != '1' && name[1] != '2') ||
      name.substr(2, 2) != "_r")
    return std::nullopt;
  int idx = 0;
  const char* end = name.data() + name.size();
  auto [ptr, ec] = std::from_chars(name.data() + 4, end, idx);
  if (ec != std::errc() || ptr != end || idx < 1) return std::nullopt;
  return std::make_pair(name[1] - '0', idx);
}

}  // namespace

GoldData LoadGoldCsv(const std::string& path) {
  auto in = detail::OpenInput(path);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (detail::ReadLine(in, line)) {
    ++line_no;
    if (detail::Trim(line).empty()) continue;
    for (auto f : detail::Split(line, ',')) header.emplace_back(Unquote(f));
    break;
  }
  if (header.empty()) throw EmptyInputError(path + ": gold file is empty");
  if (header.size() < 2 || header[0] != "emoji1" || header[1] != "emoji2")
    throw ParseError(path, line_no, "header must start with 'emoji1,emoji2'");

  // Column layout.
  std::map<int, std::size_t> q1_cols, q2_cols;  // annotator index -> column
  std::optional<std::size_t> q1_mean, q2_mean, sim_col;
  for (std::size_t c = 2; c < header.size(); ++c) {
    const auto& h = header[c];
    if (auto rc = RawColumn(h)) {
      auto& cols = rc->first == 1 ? q1_cols : q2_cols;
      if (!cols.emplace(rc->second, c).second)
        throw ParseError(path, line_no, "duplicate column " + h);
    } else if (h == "q1_mean") {
      q1_mean = c;
    } else if (h == "q2_mean") {
      q2_mean = c;
    } else if (h == "similarity") {
      sim_col = c;
    } else {
      throw ParseError(path, line_no, "unexpected column '" + h + "'");
    }
  }
  const bool raw = !q1_cols.empty() || !q2_cols.empty();
  const bool aggregated = q1_mean || q2_mean || sim_col;
  if (raw == aggregated) {
    throw ParseError(path, line_no,
                     "expected either q1_r*/q2_r* rating columns or "
                     "q1_mean,q2_mean,similarity");
  }
  if (raw && (q1_cols.empty() || q1_cols.size() != q2_cols.size())) {
    throw ParseError(path, line_no, "raw layout needs the same number of q1_r* and q2_r* columns");
  }
  if (aggregated && !(q1_mean && q2_mean)) {
    throw ParseError(path, line_no, "aggregated layout needs q1_mean and q2_mean");
  }

  GoldData data;
  AnnotationMatrix q1{Question::kQ1Equivalence, {}, {}};
  AnnotationMatrix q2{Question::kQ2Relatedness, {}, {}};
  q1.ratings.resize(q1_cols.size());
  q2.ratings.resize(q2_cols.size());

  auto rating = [&](std::string_view cell) -> Rating {
    cell = Unquote(cell);
    if (IsMissing(cell)) return std::nullopt;
    int v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || v < kMinRating ||
        v > kMaxRating) {
      throw ParseError(path, line_no, "rating '" + std::string(cell) + "' is not in 0..4");
    }
    return v;
  };
  auto number = [&](std::string_view cell, const char* what) {
    double v = 0.0;
    if (!detail::ParseDouble(Unquote(cell), v) || v < kMinRating || v > kMaxRating) {
      throw ParseError(path, line_no,
                       std::string(what) + " '" + std::string(cell) + "' is not in [0, 4]");
    }
    return v;
  };

  while (detail::ReadLine(in, line)) {
    ++line_no;
    if (detail::Trim(line).empty()) continue;
    const auto cells = detail::Split(line, ',');
    if (cells.size() != header.size()) {
      throw ParseError(path, line_no,
                       "expected " + std::to_string(header.size()) + " columns, found " +
                           std::to_string(cells.size()));
    }
    auto e1 = CanonicalEmojiId(Unquote(cells[0]));
    auto e2 = CanonicalEmojiId(Unquote(cells[1]));
    if (!e1 || !e2) throw ParseError(path, line_no, "unrecognized emoji cell");
    EmojiPair pair{*e1, *e2};
    data.pairs.push_back(pair);
    if (raw) {
      std::size_t a = 0;
      for (const auto& [idx, col] : q1_cols) q1.ratings[a++].push_back(rating(cells[col]));
      a = 0;
      for (const auto& [idx, col] : q2_cols) q2.ratings[a++].push_back(rating(cells[col]));
    } else {
      GoldPair g{pair.first, pair.second, number(cells[*q1_mean], "q1_mean"),
                 number(cells[*q2_mean], "q2_mean"), 0.0};
      g.similarity = (g.q1_mean + g.q2_mean) / 2.0;
      if (sim_col) {
        const double given = number(cells[*sim_col], "similarity");
        if (std::fabs(given - g.similarity) > 1e-6) {
          throw ParseError(path, line_no,
                           "similarity is not the mean of q1_mean and q2_mean");
        }
      }
      data.gold.push_back(std::move(g));
    }
  }

  if (raw) {
    q1.pairs = data.pairs;
    q2.pairs = data.pairs;
    try {
      data.gold = AggregateGold(q1, q2);
    } catch (const DomainError& e) {
      throw ParseError(path, 0, e.what());
    }
    data.q1 = std::move(q1);
    data.q2 = std::move(q2);
  }
  return data;
}

void WriteAggregatedGoldCsv(const std::vector<GoldPair>& gold, std::ostream& out) {
  out << "emoji1,emoji2,q1_mean,q2_mean,similarity\n";
  for (const auto& g : gold) {
    out << g.e1 << ',' << g.e2 << ',' << detail::FormatDouble(g.q1_mean) << ','
        << detail::FormatDouble(g.q2_mean) << ',' << detail::FormatDouble(g.similarity)
        << '\n';
  }
}

}  // namespace emosim
