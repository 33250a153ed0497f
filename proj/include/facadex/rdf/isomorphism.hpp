#pragma once

#include "facadex/rdf/graph.hpp"

namespace facadex::rdf {

// True iff some bijection between the blank nodes of `a` and `b` maps `a`
// onto `b` exactly. Candidates are pruned by iterated neighbourhood
// signatures before an exhaustive backtracking search.
bool isomorphic(const Graph& a, const Graph& b);
bool isomorphic(const Dataset& a, const Dataset& b);

}  // namespace facadex::rdf
