#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ontotopic {

// Input text that does not follow the expected grammar. Line and column are
// 1-based; column is 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
      : std::runtime_error(format(what, line, column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line,
                            std::size_t column) {
    std::string out = "line " + std::to_string(line);
    if (column > 0) out += ", column " + std::to_string(column);
    return out + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

class EncodingError : public ParseError {
 public:
  using ParseError::ParseError;
};

// A graph with fewer than two vertices has no density.
class DegenerateGraphError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Key not present in a graph, matrix or hierarchy.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace ontotopic
