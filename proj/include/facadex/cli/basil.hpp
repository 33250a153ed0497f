#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

// BASIL-style query parameters: `?_name` is required, `?__name` optional.
namespace facadex::cli {

using ParameterRow = std::map<std::string, std::string>;

struct ParameterRef {
  std::string name;
  bool optional = false;

  bool operator==(const ParameterRef&) const = default;
};

// Parameters referenced by the query, in order of first appearance.
std::vector<ParameterRef> findParameters(std::string_view query);

// Values are spliced raw inside <...> and string literals and inserted as a
// quoted string literal elsewhere. Missing optional parameters become "".
// Error(Usage) when a required parameter has no value in `row`.
std::string substituteParameters(std::string_view query, const ParameterRow& row);

// One query per row. With no rows the query must not need any required
// parameter and comes back as a single query.
std::vector<std::string> expandBasilParameters(std::string_view query,
                                               const std::vector<ParameterRow>& rows);

// Raw substitution for output file name patterns such as "out-?_id.ttl".
std::string expandOutputPattern(std::string_view pattern, const ParameterRow& row);

// SPARQL Results JSON, or CSV with a header row of parameter names.
std::vector<ParameterRow> readParameterFile(const std::filesystem::path& path);
std::vector<ParameterRow> parseParameterText(std::string_view text);
// Repeated name=value pairs form a single row.
ParameterRow parseInlineValues(const std::vector<std::string>& pairs);

}  // namespace facadex::cli
