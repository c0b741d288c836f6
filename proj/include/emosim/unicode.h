#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emosim {

using CodepointSeq = std::vector<char32_t>;

// Decodes UTF-8. Invalid or truncated sequences decode to U+FFFD and
// advance by one byte.
CodepointSeq DecodeUtf8(std::string_view text);
std::string EncodeUtf8(const CodepointSeq& cps);

bool IsScalarValue(char32_t cp);

// Skin-tone modifiers U+1F3FB..U+1F3FF and variation selector-16.
bool IsEmojiModifier(char32_t cp);

// Coarse test for pictographic emoji codepoints; only used to count
// unrecognized pictographs during extraction.
bool IsLikelyPictograph(char32_t cp);

// Canonical emoji identifier: "U+1F602", sequences joined with '_'
// ("U+1F468_U+200D_U+1F469"). Hex digits uppercase, at least 4 wide.
std::string FormatEmojiId(const CodepointSeq& cps);

// Accepts "U+XXXX" tokens (case-insensitive prefix) separated by spaces,
// '_' or '-'. Returns nullopt when any token is malformed or not a Unicode
// scalar value, or when there are no tokens.
std::optional<CodepointSeq> ParseEmojiId(std::string_view id);

// Resolves either a "U+..." identifier or a literal UTF-8 emoji string to
// the canonical identifier.
std::optional<std::string> CanonicalEmojiId(std::string_view text);

}  // namespace emosim
