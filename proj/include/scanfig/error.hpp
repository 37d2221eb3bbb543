#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scanfig {

// Base of every error thrown by the library. Each subclass maps to one
// failure category the CLI translates into a stable exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric parameter is outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A precondition on a compound input was violated (e.g. ablation base
// config not all-on, too few pages to split).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A geometric transform is singular or sends a point to infinity.
class DegenerateWarpError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. `offset` is a byte offset into the input when known,
// otherwise npos.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset = npos)
      : Error(what), offset_(offset) {}
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// More than one candidate where exactly one is required.
class AmbiguityError : public ParseError {
 public:
  using ParseError::ParseError;
};

// A VIA region uses a shape other than "rect".
class UnsupportedShapeError : public ParseError {
 public:
  UnsupportedShapeError(const std::string& what, std::string page_id)
      : ParseError(what), page_id_(std::move(page_id)) {}
  const std::string& page_id() const noexcept { return page_id_; }

 private:
  std::string page_id_;
};

// Row-level validation failure. `row` is 1-based.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::size_t row = 0)
      : Error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

// Invalid numeric input to a solver (negative or non-finite cost).
class InputError : public Error {
 public:
  using Error::Error;
};

// The external renderer failed; `diagnostic` carries its output.
class RendererError : public Error {
 public:
  RendererError(const std::string& what, std::string diagnostic = {})
      : Error(what), diagnostic_(std::move(diagnostic)) {}
  const std::string& diagnostic() const noexcept { return diagnostic_; }

 private:
  std::string diagnostic_;
};

// The renderer executable could not be found at all.
class RendererMissingError : public RendererError {
 public:
  using RendererError::RendererError;
};

// Plain and marked-up renders disagree on page count; the document is skipped.
class InductionAbortError : public Error {
 public:
  using Error::Error;
};

// File system or codec failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace scanfig
