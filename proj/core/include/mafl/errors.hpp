#pragma once

#include <stdexcept>
#include <string>

namespace mafl {

// Configuration text could not be parsed at all (bad syntax, unknown key).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A parsed value violates a documented bound. Carries the offending field
// name so callers (and the CLI) can report it verbatim.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Dataset ingestion failure (missing file, bad magic, truncated payload).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values or shape mismatches in model arithmetic.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Link rate is zero or negative: the upload cannot proceed this slot.
class LinkUnusableError : public std::runtime_error {
 public:
  explicit LinkUnusableError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace mafl
