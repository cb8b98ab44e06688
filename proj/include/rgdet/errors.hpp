#pragma once

#include <stdexcept>
#include <string>

namespace rgdet {

enum class ErrorKind {
  Validation,    // malformed model or state, violated precondition
  Parse,         // document syntax or schema error
  Io,            // file access, missing record
  Pole,          // a value coincides with a level (1/(eps - x) diverges)
  Collision,     // two parameters coincide where they must be distinct
  Degenerate,    // solver collapsed onto coinciding rapidities
  Convergence,   // Newton or continuation failed
  Singular,      // singular coupling / vanishing prefactor
  OutOfValidity, // formula used outside its stated range
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures carry the offending field path and, for syntax errors, the
// 1-based line in the source document (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(std::string field, int line, const std::string& message);

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_;
};

}  // namespace rgdet
