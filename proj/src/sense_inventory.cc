#include "emosim/sense_inventory.h"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include <json.hpp>

#include "emosim/error.h"
#include "emosim/vector_store.h"
#include "text_io.h"

namespace emosim {

using nlohmann::json;

PartOfSpeech ParsePartOfSpeech(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "noun" || lower == "n") return PartOfSpeech::kNoun;
  if (lower == "verb" || lower == "v") return PartOfSpeech::kVerb;
  if (lower == "adjective" || lower == "adj" || lower == "a")
    return PartOfSpeech::kAdjective;
  return PartOfSpeech::kOther;
}

std::string_view ToString(PartOfSpeech pos) {
  switch (pos) {
    case PartOfSpeech::kNoun: return "noun";
    case PartOfSpeech::kVerb: return "verb";
    case PartOfSpeech::kAdjective: return "adjective";
    case PartOfSpeech::kOther: return "other";
  }
  return "other";
}

std::string_view ToString(Regime regime) {
  switch (regime) {
    case Regime::kSenseDesc: return "desc";
    case Regime::kSenseLabel: return "label";
    case Regime::kSenseDef: return "def";
    case Regime::kSenseAll: return "all";
  }
  return "desc";
}

std::optional<Regime> ParseRegime(std::string_view s) {
  for (Regime r : kAllRegimes)
    if (ToString(r) == s) return r;
  return std::nullopt;
}

namespace {

std::string StringField(const json& obj, const char* key, const std::string& source,
                        std::size_t index) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw ParseError(source, 0,
                     "record " + std::to_string(index) + ": field '" + key +
                         "' must be a string");
  }
  return it->get<std::string>();
}

std::vector<std::string> StringArray(const json& obj, const char* key,
                                     const std::string& source, std::size_t index) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) {
    throw ParseError(source, 0,
                     "record " + std::to_string(index) + ": field '" + key +
                         "' must be an array of strings");
  }
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw ParseError(source, 0,
                       "record " + std::to_string(index) + ": field '" + key +
                           "' must be an array of strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

EmojiRecord ParseRecord(const json& obj, const std::string& source,
                        std::size_t index) {
  if (!obj.is_object())
    throw ParseError(source, 0, "record " + std::to_string(index) + " is not an object");
  auto uni = obj.find("unicode");
  if (uni == obj.end() || !uni->is_string()) {
    throw ParseError(source, 0,
                     "record " + std::to_string(index) +
                         ": missing required string field 'unicode'");
  }
  auto cps = ParseEmojiId(uni->get<std::string>());
  if (!cps) {
    throw ParseError(source, 0,
                     "record " + std::to_string(index) + ": invalid unicode id '" +
                         uni->get<std::string>() + "'");
  }

  EmojiRecord rec;
  rec.codepoints = *cps;
  rec.id = FormatEmojiId(rec.codepoints);
  rec.name = StringField(obj, "name", source, index);
  rec.short_code = StringField(obj, "short_code", source, index);
  rec.description = StringField(obj, "description", source, index);
  rec.keywords = StringArray(obj, "keywords", source, index);
  rec.related = StringArray(obj, "related", source, index);
  rec.categories = StringArray(obj, "categories", source, index);

  if (auto senses = obj.find("senses"); senses != obj.end() && !senses->is_null()) {
    if (!senses->is_array()) {
      throw ParseError(source, 0,
                       "record " + std::to_string(index) + ": 'senses' must be an array");
    }
    for (const auto& s : *senses) {
      if (!s.is_object()) {
        throw ParseError(source, 0,
                         "record " + std::to_string(index) + ": sense is not an object");
      }
      EmojiSense sense;
      sense.label_word = StringField(s, "label", source, index);
      if (detail::Trim(sense.label_word).empty()) {
        throw ParseError(source, 0,
                         "record " + std::to_string(index) + " (" + rec.id +
                             "): sense with empty label");
      }
      sense.pos = ParsePartOfSpeech(StringField(s, "pos", source, index));
      sense.gloss = StringField(s, "gloss", source, index);
      rec.senses.push_back(std::move(sense));
    }
  }
  return rec;
}

void Append(std::vector<std::string>& dst, std::vector<std::string> src) {
  dst.insert(dst.end(), std::make_move_iterator(src.begin()),
             std::make_move_iterator(src.end()));
}

}  // namespace

std::vector<EmojiRecord> ParseInventory(std::string_view json_text,
                                        const std::string& source) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(source, 0, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError(source, 0, "inventory must be a JSON array");

  std::vector<EmojiRecord> records;
  records.reserve(doc.size());
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    EmojiRecord rec = ParseRecord(doc[i], source, i);
    if (!seen.insert(rec.id).second)
      throw ParseError(source, 0, "duplicate emoji id " + rec.id);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<EmojiRecord> LoadInventory(const std::string& path) {
  auto in = detail::OpenInput(path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return ParseInventory(text, path);
}

DefinitionCorpus ExtractCorpus(const EmojiRecord& record, Regime regime) {
  DefinitionCorpus corpus{record.id, regime, {}};
  auto desc = [&] { return TokenizeAndNormalize(record.description); };
  auto labels = [&] {
    std::vector<std::string> out;
    for (const auto& s : record.senses) Append(out, TokenizeAndNormalize(s.label_word));
    return out;
  };
  auto defs = [&] {
    std::string joined;
    for (const auto& s : record.senses) {
      if (s.gloss.empty()) continue;
      if (!joined.empty()) joined.push_back(' ');
      joined += s.gloss;
    }
    return TokenizeAndNormalize(joined);
  };

  switch (regime) {
    case Regime::kSenseDesc:
      corpus.tokens = desc();
      break;
    case Regime::kSenseLabel:
      corpus.tokens = labels();
      break;
    case Regime::kSenseDef:
      corpus.tokens = defs();
      break;
    case Regime::kSenseAll:
      corpus.tokens = desc();
      Append(corpus.tokens, labels());
      Append(corpus.tokens, defs());
      break;
  }
  return corpus;
}

InventoryIndex::InventoryIndex(const std::vector<EmojiRecord>& records) {
  for (const auto& r : records) by_id_.emplace(r.id, &r);
}

const EmojiRecord* InventoryIndex::Find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : it->second;
}

}  // namespace emosim
