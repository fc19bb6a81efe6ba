#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tomoqubo {

// Invalid arguments are reported with std::invalid_argument; the types below
// cover the remaining failure classes.

/// Malformed input file. `offset` is a byte offset for binary formats and a
/// 1-based line number for text formats (see `is_line`).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset, bool is_line)
      : std::runtime_error(what), offset_(offset), is_line_(is_line) {}

  std::size_t offset() const noexcept { return offset_; }
  bool is_line() const noexcept { return is_line_; }

 private:
  std::size_t offset_;
  bool is_line_;
};

class UnsupportedFormat : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A pixel value that the chosen binary encoding cannot represent.
class EncodingError : public std::runtime_error {
 public:
  EncodingError(const std::string& what, std::size_t row, std::size_t col,
                double value)
      : std::runtime_error(what), row_(row), col_(col), value_(value) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t row_;
  std::size_t col_;
  double value_;
};

/// Structurally valid input that violates a model invariant.
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Problem too large for an exhaustive method.
class SizeError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tomoqubo
