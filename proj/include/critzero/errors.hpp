#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace critzero {

enum class ErrorCode {
  invalid_dimension,
  invalid_argument,
  degenerate_input,
  convergence,
  precision,
  degenerate_spectrum,
  bracket,
  range,
  data,
  parse,
  version,
  construction,
  proposition_check,
  io,
};

constexpr std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_dimension: return "invalid_dimension";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::degenerate_input: return "degenerate_input";
    case ErrorCode::convergence: return "convergence";
    case ErrorCode::precision: return "precision";
    case ErrorCode::degenerate_spectrum: return "degenerate_spectrum";
    case ErrorCode::bracket: return "bracket";
    case ErrorCode::range: return "range";
    case ErrorCode::data: return "data";
    case ErrorCode::parse: return "parse";
    case ErrorCode::version: return "version";
    case ErrorCode::construction: return "construction";
    case ErrorCode::proposition_check: return "proposition_check";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

/// Base class of every error raised by the library. The code is stable and
/// suitable for machine parsing; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(ErrorCode::parse, "line " + std::to_string(line) + ", column " +
                                    std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace critzero
