#pragma once

#include <cstdint>
#include <optional>

#include "facadex/query/engine.hpp"

namespace facadex::query::detail {

// Evaluates expressions against one solution. SPARQL errors (type errors,
// unbound variables, failing custom functions) come back as nullopt.
class ExprEvaluator {
 public:
  explicit ExprEvaluator(const FunctionRegistry& registry) : registry_(registry) {}

  std::optional<rdf::Term> eval(const Expr& e, const Solution& row) const;
  // Effective boolean value; nullopt on error.
  std::optional<bool> test(const Expr& e, const Solution& row) const;

 private:
  rdf::Term evalOrThrow(const Expr& e, const Solution& row) const;
  rdf::Term call(const Expr& e, const Solution& row) const;

  const FunctionRegistry& registry_;
  mutable std::uint64_t bnodeCounter_ = 0;
};

// Total order used by ORDER BY: unbound < blank < IRI < literal, numbers and
// strings by value, everything else lexically.
int compareForOrder(const std::optional<rdf::Term>& a, const std::optional<rdf::Term>& b);

}  // namespace facadex::query::detail
