#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "facadex/config/options.hpp"

namespace facadex::resolve {

// Bytes of a source together with how to interpret them.
struct ResolvedSource {
  std::string bytes;
  std::string mediaType;
  std::string charset = "UTF-8";
  config::SourceSpec origin;
  // Stable identity of the origin: absolute file IRI, URL, or a content hash.
  std::string identity;
  // Set when the location is a local directory; `bytes` is then empty.
  std::optional<std::filesystem::path> directory;
  // Set for local files, used to resolve the .tsv delimiter default.
  std::optional<std::filesystem::path> file;
};

struct HttpRequestPlan {
  std::string method = "GET";
  std::string url;  // including query parameters
  std::vector<std::pair<std::string, std::string>> headers;
  std::vector<std::pair<std::string, std::string>> queryParams;
  std::optional<std::pair<std::string, std::string>> basicAuth;
};

struct ResolverPolicy {
  bool allowLocalFiles = true;
  bool allowCommands = true;
  std::chrono::seconds timeout{30};
  int maxRedirects = 5;
};

HttpRequestPlan buildHttpRequestPlan(const std::string& location,
                                     const config::FacadeOptions& options);

struct HttpResponse {
  int status = 0;
  std::string body;
  std::string contentType;
};

HttpResponse executeHttp(const HttpRequestPlan& plan, const ResolverPolicy& policy = {});

struct CommandResult {
  std::string out;
  std::string err;
  int exitStatus = 0;
};

// Whitespace split with double-quote grouping; backslash escapes the next
// character inside quotes.
std::vector<std::string> tokenizeCommand(std::string_view command);
// Spawns the command directly (no shell) with stdin closed. Throws
// Error(Spawn) when the program cannot be started.
CommandResult runCommand(std::string_view command);

// Transcodes between `charset` and UTF-8 (iconv names).
std::string decodeToUtf8(std::string_view bytes, std::string_view charset);
std::string encodeFromUtf8(std::string_view text, std::string_view charset);

ResolvedSource resolve(const config::SourceSpec& spec, const config::FacadeOptions& options,
                       const ResolverPolicy& policy = {});

}  // namespace facadex::resolve
