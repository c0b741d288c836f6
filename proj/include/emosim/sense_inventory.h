#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "emosim/unicode.h"

namespace emosim {

enum class PartOfSpeech { kNoun, kVerb, kAdjective, kOther };

PartOfSpeech ParsePartOfSpeech(std::string_view s);
std::string_view ToString(PartOfSpeech pos);

struct EmojiSense {
  std::string label_word;
  PartOfSpeech pos = PartOfSpeech::kOther;
  std::string gloss;  // may be empty for label-only senses

  bool label_only() const { return gloss.empty(); }
};

// One inventory entry: unicode id, name, short code, description, keywords,
// related emoji, categories and senses. Image assets are not modelled.
struct EmojiRecord {
  std::string id;  // canonical, see FormatEmojiId
  CodepointSeq codepoints;
  std::string name;
  std::string short_code;
  std::string description;
  std::vector<std::string> keywords;
  std::vector<std::string> related;
  std::vector<std::string> categories;
  std::vector<EmojiSense> senses;
};

// Which textual source represents an emoji's meaning.
enum class Regime { kSenseDesc, kSenseLabel, kSenseDef, kSenseAll };

inline constexpr Regime kAllRegimes[] = {Regime::kSenseDesc, Regime::kSenseLabel,
                                         Regime::kSenseDef, Regime::kSenseAll};

// Short names used on the command line and in model files:
// desc, label, def, all.
std::string_view ToString(Regime regime);
std::optional<Regime> ParseRegime(std::string_view s);

struct DefinitionCorpus {
  std::string emoji;
  Regime regime = Regime::kSenseDesc;
  std::vector<std::string> tokens;  // normalized, source order

  bool is_empty() const { return tokens.empty(); }
};

// Loads the inventory JSON (an array of emoji objects). Throws ParseError on
// malformed JSON, a missing or invalid `unicode` field, or a duplicate id.
std::vector<EmojiRecord> LoadInventory(const std::string& path);
std::vector<EmojiRecord> ParseInventory(std::string_view json_text,
                                        const std::string& source = "<inventory>");

DefinitionCorpus ExtractCorpus(const EmojiRecord& record, Regime regime);

// id -> record lookup over a loaded inventory. Holds pointers into the
// vector, which must outlive the index.
class InventoryIndex {
 public:
  explicit InventoryIndex(const std::vector<EmojiRecord>& records);
  const EmojiRecord* Find(std::string_view id) const;

 private:
  std::unordered_map<std::string, const EmojiRecord*> by_id_;
};

}  // namespace emosim
