#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "facadex/query/engine.hpp"

namespace facadex::cli {

enum class ResultFormat { Json, Xml, Csv, Text, Turtle, NTriples, NQuads };

// JSON, XML, CSV, TEXT, TTL, NT, NQ (case-insensitive).
std::optional<ResultFormat> resultFormatFromName(std::string_view name);
std::string_view nameOf(ResultFormat format);
std::string_view mediaTypeOf(ResultFormat format);

// Graph formats go with CONSTRUCT, the rest with SELECT and ASK.
bool compatible(ResultFormat format, query::QueryForm form);
ResultFormat defaultFormat(query::QueryForm form);

// Error(Usage) when the pairing is incompatible.
std::string formatResult(const query::QueryResult& result, ResultFormat format);

// Reads a SPARQL Results JSON document (SELECT or ASK).
query::QueryResult parseResultsJson(std::string_view text);

}  // namespace facadex::cli
