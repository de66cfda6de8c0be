#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hoprank {

/// Input data is malformed or inconsistent (bad files, empty graphs, id mismatches).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A record in a text input could not be parsed. Carries the 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hoprank
