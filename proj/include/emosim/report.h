#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "emosim/corpus_pipeline.h"
#include "emosim/emoji_embedding.h"
#include "emosim/gold_eval.h"
#include "emosim/sentiment.h"
#include "emosim/vector_store.h"

namespace emosim {

using Json = nlohmann::ordered_json;

Json ToJson(const EvaluationReport& report);
Json ToJson(const AgreementResult& result);
Json ToJson(const SplitReport& report);
Json ToJson(const BuildDiagnostics& diag);

// Fixed-width table of evaluation rows (regime, source, n, rho x 100).
void PrintEvaluationTable(const std::vector<EvaluationReport>& rows, std::ostream& out);
void PrintSplitTable(const SplitReport& report, std::ostream& out);

struct VectorSource {
  std::string tag;
  std::string path;
  VectorFileFormat format = VectorFileFormat::kHeaderText;
};

struct ReportAllInputs {
  std::string inventory_path;
  std::vector<VectorSource> vectors;
  std::string gold_path;
};

// Every regime over every vector source, each evaluated against the gold
// pairs. Word-vector files are loaded restricted to the tokens the
// inventory's definition corpora use. Rows are ordered source-major,
// regimes in desc, label, def, all order. Also reports the mean corpus
// length per regime over the emoji that appear in the gold pairs.
Json RunReportAll(const ReportAllInputs& inputs, std::vector<EvaluationReport>* rows = nullptr);

}  // namespace emosim
