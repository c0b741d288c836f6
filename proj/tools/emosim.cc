// emosim: emoji similarity from sense definitions.
//
// Every subcommand prints one JSON document on stdout and, where useful, a
// human-readable table on stderr. Exit status: 0 ok, 1 usage, 2 data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emosim/corpus_pipeline.h"
#include "emosim/emoji_embedding.h"
#include "emosim/error.h"
#include "emosim/gold_eval.h"
#include "emosim/report.h"
#include "emosim/sense_inventory.h"
#include "emosim/sentiment.h"
#include "emosim/unicode.h"
#include "emosim/vector_store.h"

namespace {

using emosim::Json;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void Emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw emosim::Error(path + ": cannot open for writing");
  return out;
}

// Refuses to overwrite anything the command reads.
void CheckOutput(const std::string& out, std::initializer_list<const std::string*> inputs) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::exists(out, ec)) return;
  for (const std::string* in : inputs) {
    if (in && !in->empty() && fs::exists(*in, ec) && fs::equivalent(out, *in, ec))
      throw emosim::Error("output " + out + " would overwrite input " + *in);
  }
}

std::string Canonical(const std::string& text) {
  auto id = emosim::CanonicalEmojiId(text);
  if (!id) throw UsageError("'" + text + "' is neither a U+ id nor an emoji");
  return *id;
}

std::pair<std::string, std::string> SplitPair(const std::string& spec) {
  const auto comma = spec.find(',');
  if (comma == std::string::npos) throw UsageError("pair must be 'emoji1,emoji2': " + spec);
  return {Canonical(spec.substr(0, comma)), Canonical(spec.substr(comma + 1))};
}

emosim::Regime RegimeOf(const std::string& name) {
  auto r = emosim::ParseRegime(name);
  if (!r) throw UsageError("unknown regime '" + name + "' (desc, label, def, all)");
  return *r;
}

emosim::VectorFileFormat FormatOf(const std::string& name) {
  if (name == "header") return emosim::VectorFileFormat::kHeaderText;
  if (name == "headerless") return emosim::VectorFileFormat::kHeaderlessText;
  throw UsageError("unknown vector format '" + name + "' (header, headerless)");
}

emosim::Comparator ComparatorOf(const std::string& name) {
  if (name == "cosine") return emosim::CosineSimilarity;
  if (name == "dot") return emosim::DotProductSimilarity;
  if (name == "euclidean") return emosim::NegativeEuclidean;
  throw UsageError("unknown comparator '" + name + "' (cosine, dot, euclidean)");
}

Json Coverage(const emosim::EmojiEmbeddingModel& model) {
  Json j = Json::object();
  for (const auto& [id, c] : model.coverage()) j[id] = {c.matched, c.total};
  return j;
}

std::vector<std::string> InventoryIds(const std::string& path) {
  std::vector<std::string> ids;
  if (path.empty()) return ids;
  for (const auto& r : emosim::LoadInventory(path)) ids.push_back(r.id);
  return ids;
}

// Pairs file: one "emoji1,emoji2" (or tab separated) per line; a header
// line starting with "emoji1" is skipped.
std::vector<emosim::EmojiPair> ReadPairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw emosim::ParseError(path, 0, "cannot open file");
  std::vector<emosim::EmojiPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line.starts_with("emoji1"))
      continue;
    const auto sep = line.find_first_of(",\t");
    if (sep == std::string::npos) throw emosim::ParseError(path, line_no, "expected two emoji");
    auto rest = line.substr(sep + 1);
    rest = rest.substr(0, rest.find_first_of(",\t"));
    auto a = emosim::CanonicalEmojiId(line.substr(0, sep));
    auto b = emosim::CanonicalEmojiId(rest);
    if (!a || !b) throw emosim::ParseError(path, line_no, "unrecognized emoji");
    pairs.push_back({*a, *b});
  }
  return pairs;
}

struct Options {
  std::string inventory, vectors, vectors_format = "header", regime = "all", out, tag;
  std::string model, comparator = "cosine", emoji, pairs_file, table_out;
  std::vector<std::string> pairs;
  std::size_t k = 10;
  std::string tweets;
  double coverage = 0.25;
  std::string gold, question = "q1";
  bool histograms = false;
  std::string train, test, words, emoji_model, predictions;
  emosim::TrainConfig train_config;
  std::vector<std::string> vector_sources;
};

void BuildEmbeddings(const Options& o) {
  CheckOutput(o.out, {&o.inventory, &o.vectors});
  const auto inventory = emosim::LoadInventory(o.inventory);
  emosim::VectorLoadOptions load;
  load.source_tag = o.tag;
  const auto store = emosim::LoadWordVectors(o.vectors, FormatOf(o.vectors_format), load);
  const auto built = emosim::BuildModel(inventory, RegimeOf(o.regime), store);
  emosim::SaveModel(built.model, o.out);

  Json j;
  j["regime"] = std::string(emosim::ToString(built.model.regime()));
  j["source_tag"] = built.model.source_tag();
  j["dimension"] = built.model.dimension();
  j["inventory_emoji"] = inventory.size();
  j["emoji_embedded"] = built.model.size();
  j["diagnostics"] = emosim::ToJson(built.diagnostics);
  j["coverage"] = Coverage(built.model);
  j["vector_load"] = {{"lines_read", store.diagnostics().lines_read},
                      {"duplicate_tokens", store.diagnostics().duplicate_tokens},
                      {"empty_tokens", store.diagnostics().empty_tokens}};
  j["out"] = o.out;
  Emit(j);
  std::cerr << "embedded " << built.model.size() << " of " << inventory.size() << " emoji ("
            << built.diagnostics.dropped.size() << " dropped for zero coverage)\n";
}

void SimilarityCmd(const Options& o) {
  const auto model = emosim::LoadModel(o.model);
  const auto cmp = ComparatorOf(o.comparator);
  Json results = Json::array();
  for (const auto& spec : o.pairs) {
    const auto [a, b] = SplitPair(spec);
    results.push_back({{"emoji1", a}, {"emoji2", b}, {"score", emosim::Similarity(model, a, b, cmp)}});
  }
  Json j;
  j["comparator"] = o.comparator;
  j["results"] = std::move(results);
  Emit(j);
}

void NearestCmd(const Options& o) {
  const auto model = emosim::LoadModel(o.model);
  const std::string e = Canonical(o.emoji);
  Json n = Json::array();
  for (const auto& [id, score] : emosim::Nearest(model, e, o.k, ComparatorOf(o.comparator)))
    n.push_back({{"emoji", id}, {"score", score}});
  Json j;
  j["emoji"] = e;
  j["k"] = o.k;
  j["neighbours"] = std::move(n);
  Emit(j);
}

void RankCmd(const Options& o) {
  const auto model = emosim::LoadModel(o.model);
  const auto ranked = emosim::RankPairs(model, ReadPairs(o.pairs_file), ComparatorOf(o.comparator));
  Json rows = Json::array();
  for (const auto& r : ranked.ranked)
    rows.push_back({{"emoji1", r.pair.first}, {"emoji2", r.pair.second}, {"score", r.score}, {"rank", r.rank}});
  Json excluded = Json::array();
  for (const auto& e : ranked.excluded)
    excluded.push_back({{"emoji1", e.pair.first}, {"emoji2", e.pair.second}, {"reason", e.reason}});
  Json j;
  j["ranked"] = std::move(rows);
  j["excluded"] = std::move(excluded);
  Emit(j);
}

void CooccurCmd(const Options& o) {
  CheckOutput(o.out, {&o.tweets, &o.inventory});
  if (!o.table_out.empty()) CheckOutput(o.table_out, {&o.tweets, &o.inventory});
  const auto inventory = emosim::LoadInventory(o.inventory);
  emosim::TweetReadStats read;
  const auto tweets = emosim::ReadTweets(o.tweets, &read);
  emosim::CooccurrenceStats stats;
  const auto table = emosim::BuildCooccurrence(tweets, emosim::EmojiMatcher(inventory), &stats);
  const auto selected = emosim::SelectPairsByCoverage(table, o.coverage);
  {
    auto out = OpenOut(o.out);
    emosim::WriteCooccurrenceTsv(selected, out);
  }
  if (!o.table_out.empty()) {
    auto out = OpenOut(o.table_out);
    emosim::WriteCooccurrenceTsv(table.Sorted(), out);
  }
  std::set<std::string> unique;
  std::uint64_t selected_mass = 0;
  for (const auto& [p, c] : selected) {
    unique.insert(p.first);
    unique.insert(p.second);
    selected_mass += c;
  }
  Json j;
  j["lines"] = read.lines;
  j["malformed_lines"] = read.malformed;
  j["tweets"] = stats.tweets;
  j["retweets_skipped"] = stats.retweets_skipped;
  j["contributing_tweets"] = stats.contributing_tweets;
  j["unknown_pictographs"] = stats.unknown_pictographs;
  j["distinct_pairs"] = table.size();
  j["total_mass"] = table.total_mass();
  j["coverage"] = o.coverage;
  j["selected_pairs"] = selected.size();
  j["selected_mass"] = selected_mass;
  j["selected_unique_emoji"] = unique.size();
  j["out"] = o.out;
  Emit(j);
  std::cerr << selected.size() << " pairs over " << unique.size() << " emoji cover "
            << selected_mass << " of " << table.total_mass() << " co-occurrences\n";
}

void AggregateGoldCmd(const Options& o) {
  const auto data = emosim::LoadGoldCsv(o.gold);
  if (!o.out.empty()) {
    CheckOutput(o.out, {&o.gold});
    auto out = OpenOut(o.out);
    emosim::WriteAggregatedGoldCsv(data.gold, out);
  }
  Json pairs = Json::array();
  for (std::size_t i = 0; i < data.gold.size(); ++i) {
    const auto& g = data.gold[i];
    Json p = {{"emoji1", g.e1}, {"emoji2", g.e2}, {"q1_mean", g.q1_mean},
              {"q2_mean", g.q2_mean}, {"similarity", g.similarity}};
    if (o.histograms && data.has_raw()) {
      p["q1_histogram"] = emosim::RatingHistogram(*data.q1, i);
      p["q2_histogram"] = emosim::RatingHistogram(*data.q2, i);
    }
    pairs.push_back(std::move(p));
  }
  Json j;
  j["layout"] = data.has_raw() ? "raw" : "aggregated";
  j["pairs"] = std::move(pairs);
  Emit(j);
}

void AgreementCmd(const Options& o) {
  const auto data = emosim::LoadGoldCsv(o.gold);
  if (!data.has_raw()) throw UsageError("agreement needs the raw rating layout");
  if (o.question != "q1" && o.question != "q2") throw UsageError("question must be q1 or q2");
  const auto& m = o.question == "q1" ? *data.q1 : *data.q2;
  Json j;
  j["question"] = o.question;
  j["annotators"] = m.annotators();
  j["pairs"] = m.pairs.size();
  j.update(emosim::ToJson(emosim::KrippendorffAlphaOrdinal(m)));
  Emit(j);
}

void EvaluateCmd(const Options& o) {
  const auto model = emosim::LoadModel(o.model);
  const auto data = emosim::LoadGoldCsv(o.gold);
  const auto rep = emosim::EvaluateModel(model, data.gold);
  Emit(emosim::ToJson(rep));
  emosim::PrintEvaluationTable({rep}, std::cerr);
}

struct SentimentInputs {
  emosim::WordVectorStore words;
  emosim::EmojiEmbeddingModel emoji;
  std::vector<std::string> extra_ids;
};

SentimentInputs LoadSentimentInputs(const Options& o) {
  return {emosim::LoadWordVectors(o.words, FormatOf(o.vectors_format)),
          emosim::LoadModel(o.emoji_model), InventoryIds(o.inventory)};
}

void SentimentTrainCmd(const Options& o) {
  CheckOutput(o.out, {&o.train, &o.words, &o.emoji_model});
  const auto in = LoadSentimentInputs(o);
  const emosim::Featurizer featurizer(in.words, in.emoji, in.extra_ids);
  auto train = emosim::LoadSentimentTsv(o.train);
  featurizer.Annotate(train);
  const auto features = featurizer.FeaturizeAll(train);
  std::vector<emosim::SentimentLabel> labels;
  std::size_t degenerate = 0, with_emoji = 0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    labels.push_back(train[i].label);
    degenerate += features[i].degenerate();
    with_emoji += train[i].has_emoji;
  }
  const auto result = emosim::TrainClassifier(features, labels, o.train_config);
  result.classifier.Save(o.out);

  std::size_t correct = 0;
  for (std::size_t i = 0; i < features.size(); ++i)
    correct += result.classifier.Predict(features[i].values) == labels[i];
  Json j;
  j["examples"] = train.size();
  j["with_emoji"] = with_emoji;
  j["degenerate_features"] = degenerate;
  j["config"] = {{"l2", o.train_config.l2},
                 {"iterations", o.train_config.iterations},
                 {"learning_rate", o.train_config.learning_rate},
                 {"seed", o.train_config.seed}};
  j["initial_loss"] = result.loss_trace.front();
  j["final_loss"] = result.loss_trace.back();
  j["loss_non_increasing"] = emosim::IsNonIncreasing(result.loss_trace);
  j["training_accuracy"] = static_cast<double>(correct) / static_cast<double>(train.size());
  j["out"] = o.out;
  Emit(j);
}

void SentimentEvalCmd(const Options& o) {
  const auto in = LoadSentimentInputs(o);
  const emosim::Featurizer featurizer(in.words, in.emoji, in.extra_ids);
  auto test = emosim::LoadSentimentTsv(o.test);
  emosim::SplitReport rep;
  Json j;
  if (!o.predictions.empty()) {
    const auto emoji = featurizer.Annotate(test);
    rep = emosim::EvaluatePredictions(test, emoji, emosim::LoadPredictions(o.predictions));
    j["predictions"] = o.predictions;
  } else {
    if (o.model.empty()) throw UsageError("sentiment-eval needs --model or --predictions");
    rep = emosim::EvaluateSplits(emosim::SoftmaxClassifier::Load(o.model), test, featurizer);
    j["model"] = o.model;
  }
  j["emoji_model"] = {{"regime", std::string(emosim::ToString(in.emoji.regime()))},
                      {"source_tag", in.emoji.source_tag()}};
  j.update(emosim::ToJson(rep));
  Emit(j);
  emosim::PrintSplitTable(rep, std::cerr);
}

void ReportAllCmd(const Options& o) {
  emosim::ReportAllInputs inputs;
  inputs.inventory_path = o.inventory;
  inputs.gold_path = o.gold;
  for (const auto& spec : o.vector_sources) {
    const auto eq = spec.find('=');
    emosim::VectorSource src;
    if (eq == std::string::npos) {
      src.path = spec;
      src.tag = std::filesystem::path(spec).stem().string();
    } else {
      src.tag = spec.substr(0, eq);
      src.path = spec.substr(eq + 1);
    }
    if (src.tag.empty() || src.path.empty()) throw UsageError("--vectors expects tag=path");
    src.format = FormatOf(o.vectors_format);
    inputs.vectors.push_back(std::move(src));
  }
  std::vector<emosim::EvaluationReport> rows;
  Emit(emosim::RunReportAll(inputs, &rows));
  emosim::PrintEvaluationTable(rows, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emoji similarity from sense-inventory definitions", "emosim"};
  app.set_version_flag("--version", std::string("emosim ") + EMOSIM_VERSION);
  app.set_config("--config", "", "TOML file of option values; flags on the command line win");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  Options o;
  auto existing = [](CLI::Option* opt) { return opt->check(CLI::ExistingFile); };
  auto format_opt = [&](CLI::App* sub) {
    sub->add_option("--vectors-format", o.vectors_format, "header or headerless")
        ->capture_default_str();
  };
  auto comparator_opt = [&](CLI::App* sub) {
    sub->add_option("--comparator", o.comparator, "cosine, dot or euclidean")
        ->capture_default_str();
  };

  auto* build = app.add_subcommand("build-embeddings", "Average word vectors into an emoji model");
  existing(build->add_option("--inventory", o.inventory, "Inventory JSON")->required());
  existing(build->add_option("--vectors", o.vectors, "Word-vector text file")->required());
  build->add_option("--regime", o.regime, "desc, label, def or all")->capture_default_str();
  build->add_option("--tag", o.tag, "Source tag (default: vector file stem)");
  build->add_option("--out", o.out, "Model file to write")->required();
  format_opt(build);
  build->callback([&] { BuildEmbeddings(o); });

  auto* sim = app.add_subcommand("similarity", "Score emoji pairs");
  existing(sim->add_option("--model", o.model, "Emoji model file")->required());
  sim->add_option("--pair", o.pairs, "emoji1,emoji2 (repeatable)")->required();
  comparator_opt(sim);
  sim->callback([&] { SimilarityCmd(o); });

  auto* nearest = app.add_subcommand("nearest", "Most similar emoji");
  existing(nearest->add_option("--model", o.model, "Emoji model file")->required());
  nearest->add_option("--emoji", o.emoji, "Query emoji")->required();
  nearest->add_option("-k,--k", o.k, "Neighbours to return")->capture_default_str()->check(CLI::PositiveNumber);
  comparator_opt(nearest);
  nearest->callback([&] { NearestCmd(o); });

  auto* rank = app.add_subcommand("rank", "Rank a list of emoji pairs by similarity");
  existing(rank->add_option("--model", o.model, "Emoji model file")->required());
  existing(rank->add_option("--pairs", o.pairs_file, "File of emoji1,emoji2 lines")->required());
  comparator_opt(rank);
  rank->callback([&] { RankCmd(o); });

  auto* cooccur = app.add_subcommand("cooccur", "Count emoji co-occurrence and select top pairs");
  existing(cooccur->add_option("--tweets", o.tweets, "Tweets, text or JSONL")->required());
  existing(cooccur->add_option("--inventory", o.inventory, "Inventory JSON")->required());
  cooccur->add_option("--coverage", o.coverage, "Fraction of co-occurrence mass to cover")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cooccur->add_option("--out", o.out, "Selected pairs TSV")->required();
  cooccur->add_option("--table-out", o.table_out, "Full co-occurrence table TSV");
  cooccur->callback([&] { CooccurCmd(o); });

  auto* agg = app.add_subcommand("aggregate-gold", "Average annotator ratings into gold scores");
  existing(agg->add_option("--gold", o.gold, "Gold CSV")->required());
  agg->add_option("--out", o.out, "Aggregated CSV to write");
  agg->add_flag("--histograms", o.histograms, "Include per-pair rating histograms");
  agg->callback([&] { AggregateGoldCmd(o); });

  auto* agree = app.add_subcommand("agreement", "Ordinal Krippendorff's alpha");
  existing(agree->add_option("--gold", o.gold, "Gold CSV, raw layout")->required());
  agree->add_option("--question", o.question, "q1 or q2")->capture_default_str();
  agree->callback([&] { AgreementCmd(o); });

  auto* eval = app.add_subcommand("evaluate", "Spearman's rho against gold similarity");
  existing(eval->add_option("--model", o.model, "Emoji model file")->required());
  existing(eval->add_option("--gold", o.gold, "Gold CSV")->required());
  eval->callback([&] { EvaluateCmd(o); });

  auto add_sentiment_inputs = [&](CLI::App* sub) {
    existing(sub->add_option("--words", o.words, "Word-vector text file")->required());
    existing(sub->add_option("--emoji-model", o.emoji_model, "Emoji model file")->required());
    existing(sub->add_option("--inventory", o.inventory,
                             "Inventory JSON; its emoji are recognized even without a vector"));
    format_opt(sub);
  };
  auto* strain = app.add_subcommand("sentiment-train", "Train the softmax sentiment classifier");
  existing(strain->add_option("--train", o.train, "TSV label<TAB>text")->required());
  strain->add_option("--out", o.out, "Classifier JSON to write")->required();
  strain->add_option("--l2", o.train_config.l2, "L2 penalty")->capture_default_str();
  strain->add_option("--iterations", o.train_config.iterations, "Gradient steps")->capture_default_str();
  strain->add_option("--learning-rate", o.train_config.learning_rate, "Step size")->capture_default_str();
  strain->add_option("--seed", o.train_config.seed, "Weight initialisation seed")->capture_default_str();
  add_sentiment_inputs(strain);
  strain->callback([&] { SentimentTrainCmd(o); });

  auto* seval = app.add_subcommand("sentiment-eval", "Four-segment sentiment accuracy");
  existing(seval->add_option("--test", o.test, "TSV label<TAB>text")->required());
  existing(seval->add_option("--model", o.model, "Classifier JSON"));
  existing(seval->add_option("--predictions", o.predictions,
                             "External predictions, one label per line"));
  add_sentiment_inputs(seval);
  seval->callback([&] { SentimentEvalCmd(o); });

  auto* report = app.add_subcommand("report-all", "Every regime x vector source against gold");
  existing(report->add_option("--inventory", o.inventory, "Inventory JSON")->required());
  existing(report->add_option("--gold", o.gold, "Gold CSV")->required());
  report->add_option("--vectors", o.vector_sources, "tag=path (repeatable)")->required();
  format_opt(report);
  report->callback([&] { ReportAllCmd(o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const emosim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
