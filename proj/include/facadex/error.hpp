#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace facadex {

// Every failure surfaced by the engine carries one of these kinds. The kinds
// are disjoint so callers (CLI exit codes, HTTP status mapping) can dispatch
// on them without parsing messages.
enum class ErrorKind {
  InvalidIndex,
  Syntax,              // RDF / SPARQL text that does not parse
  Config,              // invalid option value, selector, path expression
  ConflictingSource,   // more than one of location/content/command
  NoSource,            // none of location/content/command
  MissingFile,
  HttpStatus,
  Network,
  CommandFailed,
  Spawn,
  UnsupportedScheme,
  Unsupported,         // recognised but out-of-scope feature (ondisk, metadata)
  Format,              // a source whose bytes violate its declared format
  Io,
  UnsupportedEndpoint,
  UnresolvedService,
  Evaluation,
  Usage,
  Timeout,
};

std::string_view toString(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace facadex
