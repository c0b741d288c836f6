#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace emosim {

// Base for every error raised by the library. The CLI maps these to exit
// code 2; anything else escaping a subcommand is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. Carries the file and 1-based line when known
// (line 0 means "whole file").
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, const std::string& what)
      : Error(Format(file, line, what)), file_(std::move(file)), line_(line) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  static std::string Format(const std::string& file, std::size_t line,
                            const std::string& what) {
    std::string out = file.empty() ? std::string("<input>") : file;
    if (line > 0) out += ":" + std::to_string(line);
    return out + ": " + what;
  }

  std::string file_;
  std::size_t line_;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class UnknownEmojiError : public Error {
 public:
  using Error::Error;
};

// Inputs that are well-formed but violate a precondition of the operation
// (zero-norm vector, constant list in a correlation, missing class...).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace emosim
