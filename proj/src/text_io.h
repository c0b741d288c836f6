#pragma once

// Line-oriented text helpers shared by the file readers.

#include <cstddef>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace emosim::detail {

std::ifstream OpenInput(const std::string& path);
std::ofstream OpenOutput(const std::string& path);

// getline that also strips a trailing '\r'.
bool ReadLine(std::istream& in, std::string& line);

std::vector<std::string_view> SplitWhitespace(std::string_view s);
std::vector<std::string_view> Split(std::string_view s, char sep);
std::string_view Trim(std::string_view s);

// Strict full-field numeric parsing; false on trailing junk or non-finite.
bool ParseDouble(std::string_view field, double& out);
bool ParseSize(std::string_view field, std::size_t& out);

// Shortest representation that round-trips to the same double.
std::string FormatDouble(double v);

std::string FileStem(const std::string& path);

// Parses fields[1..] of a vector line into exactly `dimension` components.
// Throws ParseError naming file and line.
void ParseComponents(const std::vector<std::string_view>& fields,
                     std::size_t dimension, const std::string& file,
                     std::size_t line, std::vector<double>& out);

// True when the line looks like binary word2vec payload (NUL bytes or
// invalid UTF-8).
bool LooksBinary(std::string_view line);

}  // namespace emosim::detail
