#include "text_io.h"

#include <charconv>
#include <cmath>
#include <filesystem>

#include "emosim/error.h"
#include "emosim/unicode.h"

namespace emosim::detail {

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) throw ParseError(path, 0, "cannot open file for reading");
  return in;
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) throw Error(path + ": cannot open file for writing");
  return out;
}

bool ReadLine(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

namespace {
bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}
}  // namespace

std::vector<std::string_view> SplitWhitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && IsSpace(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !IsSpace(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsSpace(s.back())) s.remove_suffix(1);
  return s;
}

bool ParseDouble(std::string_view field, double& out) {
  if (field.empty()) return false;
  // from_chars rejects a leading '+', which some writers emit.
  if (field.front() == '+') field.remove_prefix(1);
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool ParseSize(std::string_view field, std::size_t& out) {
  if (field.empty()) return false;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::string FormatDouble(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string FileStem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

void ParseComponents(const std::vector<std::string_view>& fields,
                     std::size_t dimension, const std::string& file,
                     std::size_t line, std::vector<double>& out) {
  if (fields.size() != dimension + 1) {
    throw ParseError(file, line,
                     "expected " + std::to_string(dimension) +
                         " components, found " +
                         std::to_string(fields.empty() ? 0 : fields.size() - 1));
  }
  out.resize(dimension);
  for (std::size_t i = 0; i < dimension; ++i) {
    if (!ParseDouble(fields[i + 1], out[i])) {
      throw ParseError(file, line,
                       "component " + std::to_string(i + 1) +
                           " is not a finite number: '" +
                           std::string(fields[i + 1]) + "'");
    }
  }
}

bool LooksBinary(std::string_view line) {
  if (line.find('\0') != std::string_view::npos) return true;
  if (line.find("\xEF\xBF\xBD") != std::string_view::npos) return false;
  for (char32_t cp : DecodeUtf8(line))
    if (cp == 0xFFFD) return true;
  return false;
}

}  // namespace emosim::detail
