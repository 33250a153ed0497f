#pragma once

#include <string_view>

#include "facadex/query/algebra.hpp"

namespace facadex::query {

// Parses the supported SPARQL subset. Error(Syntax) with "line:col: ..."
// for malformed input or constructs outside the subset.
Query parseQuery(std::string_view text);

}  // namespace facadex::query
