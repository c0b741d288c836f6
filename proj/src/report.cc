#include "emosim/report.h"

#include <cstdio>
#include <set>
#include <unordered_set>

#include "emosim/error.h"
#include "emosim/numeric.h"

namespace emosim {

namespace {

Json OptionalNumber(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::string FormatCell(const std::optional<double>& v, const char* fmt) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, fmt, *v);
  return buf;
}

}  // namespace

Json ToJson(const EvaluationReport& r) {
  Json j;
  j["regime"] = r.regime;
  j["source_tag"] = r.source_tag;
  j["n_evaluated"] = r.n_evaluated;
  j["n_excluded"] = r.n_excluded;
  j["rho_x100_similarity"] = OptionalNumber(r.rho_x100_similarity);
  j["rho_x100_q1"] = OptionalNumber(r.rho_x100_q1);
  j["rho_x100_q2"] = OptionalNumber(r.rho_x100_q2);
  Json excluded = Json::array();
  for (const auto& e : r.excluded)
    excluded.push_back({{"emoji1", e.pair.first}, {"emoji2", e.pair.second}, {"reason", e.reason}});
  j["excluded"] = std::move(excluded);
  return j;
}

Json ToJson(const AgreementResult& r) {
  Json j;
  j["alpha"] = r.alpha;
  j["observed_disagreement"] = r.observed_disagreement;
  j["expected_disagreement"] = r.expected_disagreement;
  j["pairable_values"] = r.pairable_values;
  j["units_used"] = r.units_used;
  j["no_variation"] = r.no_variation;
  return j;
}

Json ToJson(const SplitReport& r) {
  Json j;
  Json segments = Json::array();
  for (const auto& s : r.segments) {
    segments.push_back({{"segment", s.name},
                        {"n", s.n},
                        {"correct", s.correct},
                        {"accuracy", OptionalNumber(s.accuracy)}});
  }
  j["segments"] = std::move(segments);
  j["frequent_emoji"] = r.frequent_emoji;
  j["emoji_occurrences"] = r.emoji_occurrences;
  return j;
}

Json ToJson(const BuildDiagnostics& d) {
  Json j;
  j["dropped_zero_coverage"] = d.dropped;
  j["empty_corpus"] = d.empty_corpus;
  j["empty_inventory"] = d.empty_inventory;
  return j;
}

void PrintEvaluationTable(const std::vector<EvaluationReport>& rows, std::ostream& out) {
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %-16s %6s %6s %10s %8s %8s\n", "regime", "source",
                "n", "excl", "rho*100", "q1", "q2");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-8s %-16s %6zu %6zu %10s %8s %8s\n", r.regime.c_str(),
                  r.source_tag.c_str(), r.n_evaluated, r.n_excluded,
                  FormatCell(r.rho_x100_similarity, "%.1f").c_str(),
                  FormatCell(r.rho_x100_q1, "%.1f").c_str(),
                  FormatCell(r.rho_x100_q2, "%.1f").c_str());
    out << line;
  }
}

void PrintSplitTable(const SplitReport& report, std::ostream& out) {
  char line[128];
  std::snprintf(line, sizeof line, "%-16s %8s %8s %9s\n", "segment", "n", "correct", "accuracy");
  out << line;
  for (const auto& s : report.segments) {
    std::snprintf(line, sizeof line, "%-16s %8zu %8zu %9s\n", s.name.c_str(), s.n, s.correct,
                  FormatCell(s.accuracy ? std::optional<double>(100.0 * *s.accuracy)
                                        : std::nullopt,
                             "%.1f")
                      .c_str());
    out << line;
  }
}

Json RunReportAll(const ReportAllInputs& inputs, std::vector<EvaluationReport>* rows_out) {
  if (inputs.vectors.empty()) throw DomainError("report-all needs at least one vector source");
  const auto inventory = LoadInventory(inputs.inventory_path);
  const GoldData gold = LoadGoldCsv(inputs.gold_path);

  std::unordered_set<std::string> vocab;
  for (const auto& rec : inventory)
    for (const auto& tok : ExtractCorpus(rec, Regime::kSenseAll).tokens) vocab.insert(tok);

  std::set<std::string> gold_emoji;
  for (const auto& g : gold.gold) {
    gold_emoji.insert(g.e1);
    gold_emoji.insert(g.e2);
  }

  Json token_means;
  for (Regime regime : kAllRegimes) {
    ExactSum total;
    std::size_t n = 0;
    for (const auto& rec : inventory) {
      if (!gold_emoji.contains(rec.id)) continue;
      total.Add(static_cast<double>(ExtractCorpus(rec, regime).tokens.size()));
      ++n;
    }
    token_means[std::string(ToString(regime))] =
        n > 0 ? Json(total.Value() / static_cast<double>(n)) : Json(nullptr);
  }

  std::vector<EvaluationReport> rows;
  Json json_rows = Json::array();
  for (const auto& source : inputs.vectors) {
    VectorLoadOptions opts;
    opts.source_tag = source.tag;
    opts.keep = [&](std::string_view tok) { return vocab.contains(std::string(tok)); };
    const WordVectorStore store = LoadWordVectors(source.path, source.format, opts);
    for (Regime regime : kAllRegimes) {
      BuildResult built = BuildModel(inventory, regime, store);
      EvaluationReport rep = EvaluateModel(built.model, gold.gold);
      Json row = ToJson(rep);
      row["n_emoji_embedded"] = built.model.size();
      row["build"] = ToJson(built.diagnostics);
      json_rows.push_back(std::move(row));
      rows.push_back(std::move(rep));
    }
  }

  Json out;
  out["inventory_emoji"] = inventory.size();
  out["gold_pairs"] = gold.gold.size();
  out["gold_emoji"] = gold_emoji.size();
  out["mean_tokens_per_regime"] = std::move(token_means);
  out["rows"] = std::move(json_rows);
  if (rows_out) *rows_out = std::move(rows);
  return out;
}

}  // namespace emosim
