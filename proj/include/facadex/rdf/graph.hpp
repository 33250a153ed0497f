#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "facadex/rdf/term.hpp"

namespace facadex::rdf {

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  auto operator<=>(const Triple&) const = default;
  bool operator==(const Triple&) const = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept;
};

// A set of triples kept in insertion order. Inserting a duplicate is a no-op.
// Subject / predicate / object indexes support pattern lookups.
class Graph {
 public:
  Graph() = default;

  // Returns false when the triple was already present. Throws Error(Syntax)
  // for a literal subject or a non-IRI predicate.
  bool insert(Triple triple);
  bool insert(Term s, Term p, Term o) {
    return insert(Triple{std::move(s), std::move(p), std::move(o)});
  }
  void insertAll(const Graph& other);

  bool contains(const Triple& triple) const { return set_.contains(triple); }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }

  std::span<const Triple> triples() const noexcept { return triples_; }
  auto begin() const noexcept { return triples_.begin(); }
  auto end() const noexcept { return triples_.end(); }

  // Triples matching the given constants; nullptr means "any".
  template <typename Fn>
  void match(const Term* s, const Term* p, const Term* o, Fn&& fn) const;

 private:
  const std::vector<std::size_t>* lookup(
      const std::unordered_map<Term, std::vector<std::size_t>, TermHash>& index,
      const Term& key) const;

  std::vector<Triple> triples_;
  std::unordered_set<Triple, TripleHash> set_;
  std::unordered_map<Term, std::vector<std::size_t>, TermHash> bySubject_;
  std::unordered_map<Term, std::vector<std::size_t>, TermHash> byPredicate_;
  std::unordered_map<Term, std::vector<std::size_t>, TermHash> byObject_;
};

// A default graph plus IRI-named graphs.
struct Dataset {
  Graph defaultGraph;
  std::map<std::string, Graph> named;

  std::size_t size() const;
};

template <typename Fn>
void Graph::match(const Term* s, const Term* p, const Term* o, Fn&& fn) const {
  // Pick the most selective bound position.
  const std::vector<std::size_t>* candidates = nullptr;
  auto consider = [&](const std::vector<std::size_t>* c) {
    if (c && (!candidates || c->size() < candidates->size())) candidates = c;
  };
  static const std::vector<std::size_t> kEmpty;
  bool anyBound = false;
  for (auto [term, index] : {std::pair{s, &bySubject_}, std::pair{p, &byPredicate_},
                             std::pair{o, &byObject_}}) {
    if (!term) continue;
    anyBound = true;
    auto* c = lookup(*index, *term);
    if (!c) {
      candidates = &kEmpty;
      break;
    }
    consider(c);
  }
  auto check = [&](const Triple& t) {
    return (!s || t.subject == *s) && (!p || t.predicate == *p) && (!o || t.object == *o);
  };
  if (!anyBound) {
    for (const auto& t : triples_) fn(t);
    return;
  }
  for (std::size_t i : *candidates) {
    const auto& t = triples_[i];
    if (check(t)) fn(t);
  }
}

}  // namespace facadex::rdf
