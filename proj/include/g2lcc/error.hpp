#pragma once

#include <stdexcept>
#include <string>

namespace g2lcc {

/// Shape or degree mismatch between operands.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed textual input. `line` and `column` are 1-based; 0 means unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t column, std::size_t line = 0)
      : std::runtime_error(what), column_(column), line_(line) {}

  std::size_t column() const { return column_; }
  std::size_t line() const { return line_; }

  /// Same error, attributed to a line of a multi-line file; columns are
  /// shifted by `column_offset` (position of the parsed substring).
  ParseError at_line(std::size_t line, std::size_t column_offset = 0) const {
    return ParseError(what(), column_ + column_offset, line);
  }

 private:
  std::size_t column_;
  std::size_t line_;
};

/// A computation was asked of data that does not support it: degenerate
/// 3-forms, unstable pairs, singular linear systems, and so on.
class NumericError : public std::runtime_error {
 public:
  enum class Kind {
    NotAG2Form,
    NotStable,
    NotCompatible,
    NotNormalized,
    NotPositive,
    NotADerivation,
    NotInPattern,
    NotNearlyKahler,
    NotCoupled,
    Singular,
    InvalidArgument,
  };

  NumericError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

const char* to_string(NumericError::Kind kind);

}  // namespace g2lcc
