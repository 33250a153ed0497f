#include "facadex/rdf/graph.hpp"

#include "facadex/error.hpp"

namespace facadex::rdf {

std::size_t TripleHash::operator()(const Triple& t) const noexcept {
  TermHash h;
  std::size_t seed = h(t.subject);
  seed ^= h(t.predicate) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  seed ^= h(t.object) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  return seed;
}

bool Graph::insert(Triple triple) {
  if (triple.subject.isLiteral()) {
    throw Error(ErrorKind::Syntax, "literal in subject position: " + triple.subject.toNTriples());
  }
  if (!triple.predicate.isIri()) {
    throw Error(ErrorKind::Syntax, "predicate must be an IRI: " + triple.predicate.toNTriples());
  }
  if (set_.contains(triple)) return false;
  std::size_t id = triples_.size();
  set_.insert(triple);
  bySubject_[triple.subject].push_back(id);
  byPredicate_[triple.predicate].push_back(id);
  byObject_[triple.object].push_back(id);
  triples_.push_back(std::move(triple));
  return true;
}

void Graph::insertAll(const Graph& other) {
  for (const auto& t : other) insert(t);
}

const std::vector<std::size_t>* Graph::lookup(
    const std::unordered_map<Term, std::vector<std::size_t>, TermHash>& index,
    const Term& key) const {
  auto it = index.find(key);
  return it == index.end() ? nullptr : &it->second;
}

std::size_t Dataset::size() const {
  std::size_t n = defaultGraph.size();
  for (const auto& [_, g] : named) n += g.size();
  return n;
}

}  // namespace facadex::rdf
