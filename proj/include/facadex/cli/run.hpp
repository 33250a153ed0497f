#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace facadex::cli {

struct Invocation {
  std::string query;  // path to a query file, or the query text itself
  std::optional<std::string> format;
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> valuesFile;
  std::vector<std::string> inlineValues;
  std::optional<std::string> outputPattern;
  std::optional<std::filesystem::path> load;
  std::optional<std::chrono::milliseconds> timeout;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Results go to `out` (or files), diagnostics to `err`.
int run(const Invocation& invocation, std::ostream& out, std::ostream& err);

}  // namespace facadex::cli
