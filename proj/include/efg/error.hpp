#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace efg {

enum class ErrorCode {
  NotFound,
  InvalidGraph,
  TransformNotApplicable,
  OracleTooLarge,
  SpecMismatch,
  ConfigError,
  Ingest,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

// A located problem found while reading a graph document.  `code` is a short
// stable identifier (e.g. "E011") that scripts can match on.
struct Diagnostic {
  std::string code;
  std::string message;
  std::size_t line = 0;
  std::size_t column = 0;

  std::string format(std::string_view source) const;
};

class IngestError : public Error {
public:
  IngestError(Diagnostic diagnostic, std::string_view source = "<input>")
      : Error(ErrorCode::Ingest, diagnostic.format(source)),
        diagnostic_(std::move(diagnostic)) {}

  const Diagnostic &diagnostic() const noexcept { return diagnostic_; }

private:
  Diagnostic diagnostic_;
};

} // namespace efg
