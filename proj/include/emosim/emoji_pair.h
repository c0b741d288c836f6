#pragma once

#include <compare>
#include <string>
#include <utility>

namespace emosim {

struct EmojiPair {
  std::string first;
  std::string second;

  auto operator<=>(const EmojiPair&) const = default;
};

// Unordered pair in canonical (lexicographic) order.
inline EmojiPair CanonicalPair(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

}  // namespace emosim
