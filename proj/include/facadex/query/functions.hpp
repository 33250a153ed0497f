#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "facadex/rdf/graph.hpp"

namespace facadex::query {

// Custom functions take evaluated arguments and throw Error(Evaluation) on
// bad input; the caller turns that into an unbound result.
using Function = std::function<rdf::Term(const std::vector<rdf::Term>&)>;

// A magic property computes matches for ⟨s, P, o⟩ instead of looking P up.
// Unbound positions are nullopt; `emit` receives each matching (s, o).
using MagicProperty =
    std::function<void(const rdf::Graph&, const std::optional<rdf::Term>& s,
                       const std::optional<rdf::Term>& o,
                       const std::function<void(const rdf::Term&, const rdf::Term&)>& emit)>;

class FunctionRegistry {
 public:
  // Error(Config) when the IRI is already registered.
  void addFunction(std::string iri, Function fn);
  void addMagicProperty(std::string iri, MagicProperty fn);

  const Function* function(const std::string& iri) const;
  const MagicProperty* magicProperty(const std::string& iri) const;

  // fx:entity, fx:literal, fx:next, fx:prev, fx:before, fx:after, fx:anySlot.
  static const FunctionRegistry& standard();

 private:
  std::map<std::string, Function> functions_;
  std::map<std::string, MagicProperty> magic_;
};

rdf::Term fxEntity(const std::vector<rdf::Term>& args);
rdf::Term fxLiteral(const rdf::Term& lexical, const rdf::Term& spec);
rdf::Term fxNext(const rdf::Term& p);
rdf::Term fxPrev(const rdf::Term& p);
bool fxBefore(const rdf::Term& a, const rdf::Term& b);
bool fxAfter(const rdf::Term& a, const rdf::Term& b);

void anySlotMatch(const rdf::Graph& g, const std::optional<rdf::Term>& s,
                  const std::optional<rdf::Term>& o,
                  const std::function<void(const rdf::Term&, const rdf::Term&)>& emit);

}  // namespace facadex::query
