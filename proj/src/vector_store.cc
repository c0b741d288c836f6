#include "emosim/vector_store.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "emosim/error.h"
#include "emosim/porter_stemmer.h"
#include "text_io.h"

namespace emosim {

WordVectorStore::WordVectorStore(std::size_t dimension, std::string source_tag)
    : dimension_(dimension), source_tag_(std::move(source_tag)) {
  if (dimension_ == 0) throw DomainError("vector dimension must be positive");
}

std::optional<std::span<const double>> WordVectorStore::Lookup(
    std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return std::span<const double>(data_.data() + it->second * dimension_,
                                 dimension_);
}

bool WordVectorStore::Insert(std::string token, std::span<const double> values) {
  if (values.size() != dimension_) {
    throw DimensionMismatchError("vector for '" + token + "' has " +
                                 std::to_string(values.size()) +
                                 " components, store dimension is " +
                                 std::to_string(dimension_));
  }
  for (double v : values)
    if (!std::isfinite(v))
      throw DomainError("vector for '" + token + "' has a non-finite component");
  if (index_.contains(token)) return false;
  index_.emplace(token, tokens_.size());
  tokens_.push_back(std::move(token));
  data_.insert(data_.end(), values.begin(), values.end());
  return true;
}

WordVectorStore LoadWordVectors(const std::string& path, VectorFileFormat format,
                                const VectorLoadOptions& options) {
  auto in = detail::OpenInput(path);
  const std::string tag =
      options.source_tag.empty() ? detail::FileStem(path) : options.source_tag;

  std::string line;
  std::size_t line_no = 0;
  std::optional<WordVectorStore> store;
  VectorLoadDiagnostics diag;
  bool saw_content = false;

  auto binary_error = [&] {
    return ParseError(path, line_no,
                      "binary word2vec files are not supported; convert to the "
                      "text format first");
  };

  std::vector<double> values;
  while (detail::ReadLine(in, line)) {
    ++line_no;
    if (detail::LooksBinary(line)) throw binary_error();
    const auto fields = detail::SplitWhitespace(line);
    if (fields.empty()) continue;
    saw_content = true;

    if (!store && format == VectorFileFormat::kHeaderText) {
      std::size_t count = 0, dim = 0;
      if (fields.size() != 2 || !detail::ParseSize(fields[0], count) ||
          !detail::ParseSize(fields[1], dim) || dim == 0) {
        throw ParseError(path, line_no,
                         "expected header '<vocab_count> <dimension>'");
      }
      diag.declared_count = count;
      store.emplace(dim, tag);
      continue;
    }
    if (!store) {
      if (fields.size() < 2)
        throw ParseError(path, line_no, "vector line has no components");
      store.emplace(fields.size() - 1, tag);
    }

    ++diag.lines_read;
    detail::ParseComponents(fields, store->dimension(), path, line_no, values);
    std::string key = options.normalize_keys ? NormalizeToken(fields[0])
                                             : std::string(fields[0]);
    if (key.empty()) {
      ++diag.empty_tokens;
      continue;
    }
    if (options.keep && !options.keep(key)) {
      ++diag.filtered_tokens;
      continue;
    }
    if (!store->Insert(std::move(key), values)) ++diag.duplicate_tokens;
  }

  if (!saw_content) throw EmptyInputError(path + ": vector file is empty");
  store->diagnostics_ = diag;
  return std::move(*store);
}

namespace {

bool IsAsciiPunct(unsigned char c) { return c < 0x80 && std::ispunct(c); }

}  // namespace

std::string NormalizeToken(std::string_view raw) {
  std::size_t begin = 0, end = raw.size();
  while (begin < end && IsAsciiPunct(raw[begin])) ++begin;
  while (end > begin && IsAsciiPunct(raw[end - 1])) --end;
  std::string token(raw.substr(begin, end - begin));
  bool alpha = !token.empty();
  for (char& c : token) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80) c = static_cast<char>(std::tolower(u));
    if (c < 'a' || c > 'z') alpha = false;
  }
  if (!alpha) return token;
  // A single Porter pass is not idempotent ("agreed" -> "agre" -> "agr"),
  // so iterate to the fixed point. Each pass never lengthens the word.
  while (true) {
    std::string next = PorterStem(token);
    if (next == token) return token;
    token = std::move(next);
  }
}

std::vector<std::string> TokenizeAndNormalize(std::string_view text) {
  std::vector<std::string> out;
  for (auto piece : detail::SplitWhitespace(text)) {
    std::string t = NormalizeToken(piece);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace emosim
