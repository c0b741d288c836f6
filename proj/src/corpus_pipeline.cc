#include "emosim/corpus_pipeline.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "emosim/error.h"
#include "emosim/parallel.h"
#include "text_io.h"

namespace emosim {

namespace {

bool HasRetweetPrefix(std::string_view text) {
  return detail::Trim(text).starts_with("RT @");
}

}  // namespace

std::optional<Tweet> ParseTweetLine(std::string_view line) {
  const auto trimmed = detail::Trim(line);
  if (trimmed.empty()) return std::nullopt;
  Tweet tweet;
  if (trimmed.front() == '{') {
    auto doc = nlohmann::json::parse(trimmed, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
    auto text = doc.find("text");
    if (text == doc.end() || !text->is_string()) return std::nullopt;
    tweet.text = text->get<std::string>();
    if (auto id = doc.find("id"); id != doc.end()) {
      if (id->is_string()) {
        tweet.id = id->get<std::string>();
      } else if (id->is_number_integer()) {
        tweet.id = std::to_string(id->get<long long>());
      }
    }
    if (auto rt = doc.find("is_retweet"); rt != doc.end() && rt->is_boolean()) {
      tweet.is_retweet = rt->get<bool>();
    } else {
      tweet.is_retweet = HasRetweetPrefix(tweet.text);
    }
  } else {
    tweet.text = std::string(trimmed);
    tweet.is_retweet = HasRetweetPrefix(tweet.text);
  }
  if (detail::Trim(tweet.text).empty()) return std::nullopt;
  return tweet;
}

std::vector<Tweet> ReadTweets(const std::string& path, TweetReadStats* stats) {
  auto in = detail::OpenInput(path);
  TweetReadStats local;
  std::vector<Tweet> tweets;
  std::string line;
  while (detail::ReadLine(in, line)) {
    ++local.lines;
    if (auto t = ParseTweetLine(line)) {
      tweets.push_back(std::move(*t));
    } else {
      ++local.malformed;
    }
  }
  if (stats) *stats = local;
  return tweets;
}

EmojiMatcher::EmojiMatcher(const std::vector<EmojiRecord>& inventory) {
  for (const auto& r : inventory) Insert(r.codepoints, r.id, /*overwrite=*/true);
  for (const auto& r : inventory) {
    CodepointSeq stripped;
    for (char32_t c : r.codepoints)
      if (!IsEmojiModifier(c)) stripped.push_back(c);
    if (!stripped.empty() && stripped != r.codepoints)
      Insert(stripped, r.id, /*overwrite=*/false);
  }
}

EmojiMatcher::EmojiMatcher(const std::vector<std::string>& emoji_ids) {
  std::vector<EmojiRecord> records;
  for (const auto& id : emoji_ids) {
    auto cps = ParseEmojiId(id);
    if (!cps) throw DomainError("invalid emoji id '" + id + "'");
    EmojiRecord r;
    r.codepoints = *cps;
    r.id = FormatEmojiId(*cps);
    records.push_back(std::move(r));
  }
  *this = EmojiMatcher(records);
}

void EmojiMatcher::Insert(const CodepointSeq& seq, const std::string& id,
                          bool overwrite) {
  std::size_t node = 0;
  for (char32_t c : seq) {
    auto it = nodes_[node].next.find(c);
    if (it == nodes_[node].next.end()) {
      nodes_.push_back(Node{});
      it = nodes_[node].next.emplace(c, nodes_.size() - 1).first;
    }
    node = it->second;
  }
  if (nodes_[node].id && !overwrite) return;
  ids_.push_back(id);
  nodes_[node].id = ids_.size() - 1;
}

std::vector<EmojiMatcher::Match> EmojiMatcher::Scan(const CodepointSeq& text,
                                                    std::size_t* unknown) const {
  std::vector<Match> out;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t node = 0;
    std::size_t j = i;
    std::optional<std::size_t> best;
    std::size_t best_end = i;
    while (j < n) {
      const auto& next = nodes_[node].next;
      auto it = next.find(text[j]);
      if (it != next.end()) {
        node = it->second;
        ++j;
        if (nodes_[node].id) {
          best = nodes_[node].id;
          best_end = j;
        }
      } else if (node != 0 && IsEmojiModifier(text[j])) {
        ++j;  // modifier the inventory does not list: skip it
      } else {
        break;
      }
    }
    if (best) {
      while (best_end < n && IsEmojiModifier(text[best_end])) ++best_end;
      out.push_back({i, best_end, ids_[*best]});
      i = best_end;
    } else {
      if (unknown && IsLikelyPictograph(text[i]) && !IsEmojiModifier(text[i]))
        ++*unknown;
      ++i;
    }
  }
  return out;
}

ExtractResult ExtractEmoji(std::string_view text, const EmojiMatcher& matcher) {
  ExtractResult result;
  for (auto& m : matcher.Scan(DecodeUtf8(text), &result.unknown_pictographs))
    result.emoji.push_back(std::move(m.id));
  return result;
}

std::string FallbackTextualFeature(const CodepointSeq& cps) {
  std::string out = "em";
  char buf[16];
  for (char32_t c : cps) {
    std::snprintf(buf, sizeof buf, "_%x", static_cast<unsigned>(c));
    out += buf;
  }
  return out;
}

std::string EmojiToTextualFeature(const EmojiRecord& record) {
  std::string_view code = detail::Trim(record.short_code);
  while (!code.empty() && code.front() == ':') code.remove_prefix(1);
  while (!code.empty() && code.back() == ':') code.remove_suffix(1);
  code = detail::Trim(code);
  if (code.empty()) return FallbackTextualFeature(record.codepoints);
  std::string out = ":";
  for (char c : code) out.push_back(std::isspace(static_cast<unsigned char>(c)) ? '_' : c);
  out.push_back(':');
  return out;
}

TextualFeatureMap::TextualFeatureMap(const std::vector<EmojiRecord>& inventory) {
  std::set<std::string> used;
  for (const auto& r : inventory) {
    std::string f = EmojiToTextualFeature(r);
    if (used.contains(f)) {
      ++collisions_;
      f = FallbackTextualFeature(r.codepoints);
    }
    used.insert(f);
    features_.emplace(r.id, std::move(f));
  }
}

std::string TextualFeatureMap::Feature(std::string_view emoji_id) const {
  if (auto it = features_.find(std::string(emoji_id)); it != features_.end())
    return it->second;
  auto cps = ParseEmojiId(emoji_id);
  if (!cps) throw UnknownEmojiError("invalid emoji id '" + std::string(emoji_id) + "'");
  return FallbackTextualFeature(*cps);
}

void CooccurrenceTable::Add(const EmojiPair& pair, std::uint64_t n) {
  if (n == 0) return;
  counts_[CanonicalPair(pair.first, pair.second)] += n;
  total_mass_ += n;
}

void CooccurrenceTable::Merge(const CooccurrenceTable& other) {
  for (const auto& [pair, n] : other.counts_) counts_[pair] += n;
  total_mass_ += other.total_mass_;
}

std::uint64_t CooccurrenceTable::Count(const std::string& a, const std::string& b) const {
  auto it = counts_.find(CanonicalPair(a, b));
  return it == counts_.end() ? 0 : it->second;
}

std::vector<std::pair<EmojiPair, std::uint64_t>> CooccurrenceTable::Sorted() const {
  std::vector<std::pair<EmojiPair, std::uint64_t>> rows(counts_.begin(), counts_.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return rows;
}

namespace {

void CountTweet(const Tweet& tweet, const EmojiMatcher& matcher,
                CooccurrenceTable& table, CooccurrenceStats& stats) {
  ++stats.tweets;
  if (tweet.is_retweet) {
    ++stats.retweets_skipped;
    return;
  }
  ExtractResult ex = ExtractEmoji(tweet.text, matcher);
  stats.unknown_pictographs += ex.unknown_pictographs;
  std::sort(ex.emoji.begin(), ex.emoji.end());
  ex.emoji.erase(std::unique(ex.emoji.begin(), ex.emoji.end()), ex.emoji.end());
  if (ex.emoji.size() < 2) return;
  ++stats.contributing_tweets;
  for (std::size_t a = 0; a < ex.emoji.size(); ++a)
    for (std::size_t b = a + 1; b < ex.emoji.size(); ++b)
      table.Add({ex.emoji[a], ex.emoji[b]});
}

}  // namespace

CooccurrenceTable BuildCooccurrence(const std::vector<Tweet>& tweets,
                                    const EmojiMatcher& matcher,
                                    CooccurrenceStats* stats) {
  const std::size_t shards = std::max<std::size_t>(1, std::min(WorkerCount(), tweets.size()));
  std::vector<CooccurrenceTable> tables(shards);
  std::vector<CooccurrenceStats> shard_stats(shards);
  const std::size_t block = (tweets.size() + shards - 1) / shards;
  ParallelFor(shards, [&](std::size_t s) {
    const std::size_t end = std::min(tweets.size(), (s + 1) * block);
    for (std::size_t i = s * block; i < end; ++i)
      CountTweet(tweets[i], matcher, tables[s], shard_stats[s]);
  });

  CooccurrenceTable merged;
  CooccurrenceStats total;
  for (std::size_t s = 0; s < shards; ++s) {
    merged.Merge(tables[s]);
    total.tweets += shard_stats[s].tweets;
    total.retweets_skipped += shard_stats[s].retweets_skipped;
    total.contributing_tweets += shard_stats[s].contributing_tweets;
    total.unknown_pictographs += shard_stats[s].unknown_pictographs;
  }
  if (stats) *stats = total;
  return merged;
}

std::vector<std::pair<EmojiPair, std::uint64_t>> SelectPairsByCoverage(
    const CooccurrenceTable& table, double coverage) {
  if (!(coverage > 0.0 && coverage <= 1.0))
    throw DomainError("coverage must lie in (0, 1]");
  if (table.total_mass() == 0) throw DomainError("co-occurrence table is empty");
  const double threshold = coverage * static_cast<double>(table.total_mass());
  auto rows = table.Sorted();
  std::uint64_t cumulative = 0;
  std::size_t keep = 0;
  while (keep < rows.size()) {
    cumulative += rows[keep].second;
    ++keep;
    if (static_cast<double>(cumulative) >= threshold) break;
  }
  rows.resize(keep);
  return rows;
}

void WriteCooccurrenceTsv(const std::vector<std::pair<EmojiPair, std::uint64_t>>& rows,
                          std::ostream& out) {
  for (const auto& [pair, n] : rows)
    out << pair.first << '\t' << pair.second << '\t' << n << '\n';
}

}  // namespace emosim
