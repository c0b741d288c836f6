#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "emosim/emoji_pair.h"
#include "emosim/sense_inventory.h"
#include "emosim/unicode.h"

namespace emosim {

struct Tweet {
  std::optional<std::string> id;
  std::string text;
  bool is_retweet = false;
};

struct TweetReadStats {
  std::size_t lines = 0;
  std::size_t malformed = 0;  // blank text, bad JSON, missing `text`
};

// One tweet per line, either plain UTF-8 text or a JSON object with `text`
// and optional `id` / `is_retweet`. Lines starting with '{' are treated as
// JSON. Without an explicit flag, a "RT @" prefix marks a retweet.
std::vector<Tweet> ReadTweets(const std::string& path, TweetReadStats* stats = nullptr);
std::optional<Tweet> ParseTweetLine(std::string_view line);

// Longest-match scanner over inventory codepoint sequences. Skin-tone
// modifiers and VS16 that the inventory does not list are stripped, so a
// modified emoji falls back to its base sequence.
class EmojiMatcher {
 public:
  explicit EmojiMatcher(const std::vector<EmojiRecord>& inventory);
  explicit EmojiMatcher(const std::vector<std::string>& emoji_ids);

  struct Match {
    std::size_t begin = 0;  // codepoint offsets, [begin, end)
    std::size_t end = 0;
    std::string id;
  };

  std::vector<Match> Scan(const CodepointSeq& text,
                          std::size_t* unknown_pictographs = nullptr) const;

 private:
  void Insert(const CodepointSeq& seq, const std::string& id, bool overwrite);

  struct Node {
    std::map<char32_t, std::size_t> next;
    std::optional<std::size_t> id;  // index into ids_
  };
  std::vector<Node> nodes_{Node{}};
  std::vector<std::string> ids_;
};

struct ExtractResult {
  std::vector<std::string> emoji;  // text order, duplicates kept
  std::size_t unknown_pictographs = 0;
};

ExtractResult ExtractEmoji(std::string_view text, const EmojiMatcher& matcher);

// ":short_code:" (spaces to underscores) or "em_1f602" when the emoji has
// no short code. Sequences join codepoints with '_' ("em_1f468_200d_1f469").
std::string FallbackTextualFeature(const CodepointSeq& cps);
std::string EmojiToTextualFeature(const EmojiRecord& record);

// Injective emoji -> feature token map over an inventory. When two records
// would share a token, the later one gets its codepoint fallback token.
class TextualFeatureMap {
 public:
  explicit TextualFeatureMap(const std::vector<EmojiRecord>& inventory);
  // Unknown ids get the codepoint fallback.
  std::string Feature(std::string_view emoji_id) const;
  std::size_t collisions_resolved() const { return collisions_; }

 private:
  std::unordered_map<std::string, std::string> features_;
  std::size_t collisions_ = 0;
};

class CooccurrenceTable {
 public:
  void Add(const EmojiPair& canonical_pair, std::uint64_t n = 1);
  void Merge(const CooccurrenceTable& other);

  std::uint64_t Count(const std::string& a, const std::string& b) const;
  std::uint64_t total_mass() const { return total_mass_; }
  std::size_t size() const { return counts_.size(); }
  const std::map<EmojiPair, std::uint64_t>& counts() const { return counts_; }

  // Descending count, ties by pair (lexicographic).
  std::vector<std::pair<EmojiPair, std::uint64_t>> Sorted() const;

  bool operator==(const CooccurrenceTable&) const = default;

 private:
  std::map<EmojiPair, std::uint64_t> counts_;
  std::uint64_t total_mass_ = 0;
};

struct CooccurrenceStats {
  std::size_t tweets = 0;
  std::size_t retweets_skipped = 0;
  std::size_t contributing_tweets = 0;  // >= 2 distinct emoji
  std::size_t unknown_pictographs = 0;
};

// Retweets are skipped. Each tweet contributes +1 to every unordered pair of
// its distinct emoji. The stream is sharded across threads and merged.
CooccurrenceTable BuildCooccurrence(const std::vector<Tweet>& tweets,
                                    const EmojiMatcher& matcher,
                                    CooccurrenceStats* stats = nullptr);

// Shortest prefix of Sorted() whose cumulative count reaches
// coverage * total_mass. Throws DomainError when coverage is outside (0, 1]
// or the table is empty.
std::vector<std::pair<EmojiPair, std::uint64_t>> SelectPairsByCoverage(
    const CooccurrenceTable& table, double coverage);

// "emoji1<TAB>emoji2<TAB>count" per line.
void WriteCooccurrenceTsv(const std::vector<std::pair<EmojiPair, std::uint64_t>>& rows,
                          std::ostream& out);

}  // namespace emosim
