#include "facadex/error.hpp"

namespace facadex {

std::string_view toString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidIndex: return "invalid-index";
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::Config: return "invalid-config";
    case ErrorKind::ConflictingSource: return "conflicting-source";
    case ErrorKind::NoSource: return "no-source";
    case ErrorKind::MissingFile: return "missing-file";
    case ErrorKind::HttpStatus: return "http-status";
    case ErrorKind::Network: return "network";
    case ErrorKind::CommandFailed: return "command-failed";
    case ErrorKind::Spawn: return "spawn-failed";
    case ErrorKind::UnsupportedScheme: return "unsupported-scheme";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Format: return "format";
    case ErrorKind::Io: return "io";
    case ErrorKind::UnsupportedEndpoint: return "unsupported-endpoint";
    case ErrorKind::UnresolvedService: return "unresolved-service";
    case ErrorKind::Evaluation: return "evaluation";
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Timeout: return "timeout";
  }
  return "unknown";
}

}  // namespace facadex
