#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "facadex/query/algebra.hpp"
#include "facadex/query/functions.hpp"
#include "facadex/resolve/source.hpp"
#include "facadex/triplify/builder.hpp"

namespace facadex::query {

using Solution = std::map<std::string, rdf::Term>;

struct ResultSet {
  std::vector<std::string> variables;
  std::vector<Solution> rows;
};

struct QueryResult {
  QueryForm form = QueryForm::Select;
  ResultSet solutions;  // Select
  rdf::Graph graph;     // Construct
  bool boolean = false; // Ask
};

struct EngineOptions {
  resolve::ResolverPolicy policy;
  // Whole-query budget; Error(Timeout) once exceeded.
  std::optional<std::chrono::milliseconds> timeout;
  const FunctionRegistry* registry = &FunctionRegistry::standard();
};

QueryResult execute(const Query& query, const rdf::Dataset& base, const EngineOptions& options = {});
QueryResult execute(std::string_view queryText, const rdf::Dataset& base,
                    const EngineOptions& options = {});

// Every triple pattern of a group, recursively, in textual order.
std::vector<TriplePattern> collectTriplePatterns(const Group& group);

// Keeps a triple when it unifies with at least one pattern. Variables match
// anything; fx:anySlot in predicate position matches any rdf:_n.
triplify::TripleFilter buildTripleFilter(std::vector<TriplePattern> patterns);

}  // namespace facadex::query
