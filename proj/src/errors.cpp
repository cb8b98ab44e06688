#include "rgdet/errors.hpp"

namespace rgdet {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::Collision: return "collision";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::OutOfValidity: return "out-of-validity";
  }
  return "unknown";
}

namespace {

std::string format_parse(const std::string& field, int line, const std::string& message) {
  std::string out = "parse error";
  if (line > 0) out += " at line " + std::to_string(line);
  if (!field.empty()) out += " in field '" + field + "'";
  return out + ": " + message;
}

}  // namespace

ParseError::ParseError(std::string field, int line, const std::string& message)
    : Error(ErrorKind::Parse, format_parse(field, line, message)),
      field_(std::move(field)),
      line_(line) {}

}  // namespace rgdet
