#include "emosim/unicode.h"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>

namespace emosim {

CodepointSeq DecodeUtf8(std::string_view text) {
  CodepointSeq out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const unsigned char*>(text.data());
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    const unsigned char b = s[i];
    int len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if (b < 0x80) {
      out.push_back(b);
      ++i;
      continue;
    } else if ((b & 0xE0) == 0xC0) {
      len = 2; cp = b & 0x1F; min = 0x80;
    } else if ((b & 0xF0) == 0xE0) {
      len = 3; cp = b & 0x0F; min = 0x800;
    } else if ((b & 0xF8) == 0xF0) {
      len = 4; cp = b & 0x07; min = 0x10000;
    }
    bool ok = len > 0 && i + len <= n;
    for (int k = 1; ok && k < len; ++k) {
      if ((s[i + k] & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (s[i + k] & 0x3F);
      }
    }
    if (ok && cp >= min && IsScalarValue(cp)) {
      out.push_back(cp);
      i += len;
    } else {
      out.push_back(0xFFFD);
      ++i;
    }
  }
  return out;
}

std::string EncodeUtf8(const CodepointSeq& cps) {
  std::string out;
  for (char32_t cp : cps) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

bool IsScalarValue(char32_t cp) {
  return cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
}

bool IsEmojiModifier(char32_t cp) {
  return (cp >= 0x1F3FB && cp <= 0x1F3FF) || cp == 0xFE0F;
}

bool IsLikelyPictograph(char32_t cp) {
  return (cp >= 0x1F000 && cp <= 0x1FAFF) || (cp >= 0x2600 && cp <= 0x27BF) ||
         (cp >= 0x2300 && cp <= 0x23FF) || (cp >= 0x2B00 && cp <= 0x2BFF);
}

std::string FormatEmojiId(const CodepointSeq& cps) {
  std::string out;
  char buf[16];
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (i > 0) out.push_back('_');
    std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(cps[i]));
    out += buf;
  }
  return out;
}

std::optional<CodepointSeq> ParseEmojiId(std::string_view id) {
  CodepointSeq out;
  std::size_t i = 0;
  while (i < id.size()) {
    while (i < id.size() && (id[i] == ' ' || id[i] == '_' || id[i] == '-')) ++i;
    if (i >= id.size()) break;
    if (i + 2 > id.size() || (id[i] != 'U' && id[i] != 'u') || id[i + 1] != '+')
      return std::nullopt;
    i += 2;
    const std::size_t start = i;
    while (i < id.size() && std::isxdigit(static_cast<unsigned char>(id[i]))) ++i;
    if (i == start || i - start > 6) return std::nullopt;
    std::uint32_t cp = 0;
    std::from_chars(id.data() + start, id.data() + i, cp, 16);
    if (!IsScalarValue(cp)) return std::nullopt;
    out.push_back(cp);
    if (i < id.size() && id[i] != ' ' && id[i] != '_' && id[i] != '-')
      return std::nullopt;
  }
  if (out.empty()) return std::nullopt;
  return out;
}

std::optional<std::string> CanonicalEmojiId(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.size() >= 2 && (text[0] == 'U' || text[0] == 'u') && text[1] == '+') {
    auto cps = ParseEmojiId(text);
    if (!cps) return std::nullopt;
    return FormatEmojiId(*cps);
  }
  // Literal emoji. ASCII is only allowed as a keycap base (#, *, 0-9).
  CodepointSeq cps = DecodeUtf8(text);
  bool non_ascii = false;
  for (char32_t cp : cps) {
    if (cp == 0xFFFD) return std::nullopt;
    if (cp >= 0x80) {
      non_ascii = true;
    } else if (cp != '#' && cp != '*' && (cp < '0' || cp > '9')) {
      return std::nullopt;
    }
  }
  if (!non_ascii) return std::nullopt;
  return FormatEmojiId(cps);
}

}  // namespace emosim
