#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace emosim {

enum class VectorFileFormat {
  kHeaderText,     // first line "<vocab_count> <dimension>"
  kHeaderlessText, // dimension taken from the first data line
};

struct VectorLoadDiagnostics {
  std::size_t lines_read = 0;
  std::size_t duplicate_tokens = 0;  // later occurrences dropped
  std::size_t empty_tokens = 0;      // tokens that normalized to ""
  std::size_t filtered_tokens = 0;   // rejected by LoadOptions::keep
  std::optional<std::size_t> declared_count;
};

struct VectorLoadOptions {
  // Store keys as NormalizeToken(raw). Off for files whose keys are
  // identifiers rather than words.
  bool normalize_keys = true;
  // Defaults to the file stem.
  std::string source_tag;
  // Optional vocabulary filter applied to the (normalized) key; lets large
  // pretrained files be loaded restricted to the tokens a run needs.
  std::function<bool(std::string_view)> keep;
};

// Read-only token -> k-vector map. Vectors live in one contiguous buffer;
// lookups hand out spans into it, valid for the lifetime of the store.
class WordVectorStore {
 public:
  WordVectorStore(std::size_t dimension, std::string source_tag);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return index_.size(); }
  const std::string& source_tag() const { return source_tag_; }
  const VectorLoadDiagnostics& diagnostics() const { return diagnostics_; }

  // Exact stored vector, or nullopt. Never a default vector.
  std::optional<std::span<const double>> Lookup(std::string_view token) const;
  bool Contains(std::string_view token) const { return Lookup(token).has_value(); }

  // Adds a vector. Returns false (and keeps the existing entry) when the
  // token is already present. Throws DimensionMismatchError on wrong length
  // and DomainError on non-finite components.
  bool Insert(std::string token, std::span<const double> values);

  // Tokens in insertion order.
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  friend WordVectorStore LoadWordVectors(const std::string&, VectorFileFormat,
                                         const VectorLoadOptions&);

  std::size_t dimension_;
  std::string source_tag_;
  std::vector<double> data_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
  VectorLoadDiagnostics diagnostics_;
};

// Parses a text-format vector file. Throws ParseError (with line number) on
// dimension mismatch, non-numeric or non-finite components, malformed
// header, or binary word2vec content; EmptyInputError on an empty file.
WordVectorStore LoadWordVectors(const std::string& path, VectorFileFormat format,
                                const VectorLoadOptions& options = {});

// Lowercase, strip surrounding ASCII punctuation, then Porter-stem purely
// alphabetic tokens until the stem no longer changes. Idempotent.
std::string NormalizeToken(std::string_view raw);

// Whitespace split followed by NormalizeToken; empty results dropped.
std::vector<std::string> TokenizeAndNormalize(std::string_view text);

}  // namespace emosim
