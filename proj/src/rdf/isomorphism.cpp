#include "facadex/rdf/isomorphism.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace facadex::rdf {
namespace {

using Colors = std::unordered_map<std::string, std::uint64_t>;

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t groundHash(const Term& t) { return TermHash{}(t); }

// One round of colour refinement over blank nodes. Ground terms hash by
// value, blank nodes by their current colour.
Colors refine(const Graph& g, const Colors& colors) {
  auto hashOf = [&](const Term& t) -> std::uint64_t {
    return t.isBlank() ? colors.at(t.value()) : groundHash(t);
  };
  std::unordered_map<std::string, std::vector<std::uint64_t>> edges;
  for (const auto& t : g) {
    if (t.subject.isBlank()) {
      edges[t.subject.value()].push_back(
          mix(mix(1, groundHash(t.predicate)), hashOf(t.object)));
    }
    if (t.object.isBlank()) {
      edges[t.object.value()].push_back(
          mix(mix(2, groundHash(t.predicate)), hashOf(t.subject)));
    }
  }
  Colors next;
  for (const auto& [label, color] : colors) {
    auto& list = edges[label];
    std::sort(list.begin(), list.end());
    std::uint64_t h = color;
    for (auto e : list) h = mix(h, e);
    next[label] = h;
  }
  return next;
}

Colors colorGraph(const Graph& g, int rounds) {
  Colors colors;
  for (const auto& t : g) {
    if (t.subject.isBlank()) colors[t.subject.value()] = 7;
    if (t.object.isBlank()) colors[t.object.value()] = 7;
  }
  for (int i = 0; i < rounds; ++i) colors = refine(g, colors);
  return colors;
}

class Matcher {
 public:
  Matcher(const Graph& a, const Graph& b, Colors ca, Colors cb)
      : a_(a), b_(b), colorsA_(std::move(ca)), colorsB_(std::move(cb)) {
    for (const auto& t : a_) {
      if (t.subject.isBlank()) incident_[t.subject.value()].push_back(&t);
      if (t.object.isBlank() && t.object != t.subject) incident_[t.object.value()].push_back(&t);
    }
    for (const auto& [label, color] : colorsB_) byColorB_[color].push_back(label);
    for (const auto& [label, _] : colorsA_) order_.push_back(label);
    // Most constrained blank nodes first.
    std::sort(order_.begin(), order_.end(), [&](const auto& x, const auto& y) {
      auto cx = byColorB_[colorsA_[x]].size();
      auto cy = byColorB_[colorsA_[y]].size();
      return cx != cy ? cx < cy : x < y;
    });
  }

  bool run() { return search(0); }

 private:
  std::optional<Term> mapped(const Term& t) const {
    if (!t.isBlank()) return t;
    auto it = forward_.find(t.value());
    if (it == forward_.end()) return std::nullopt;
    return Term::blank(it->second);
  }

  bool consistent(const std::string& label) const {
    for (const Triple* t : incident_.at(label)) {
      auto s = mapped(t->subject);
      auto o = mapped(t->object);
      if (!s || !o) continue;
      if (!b_.contains(Triple{*s, t->predicate, *o})) return false;
    }
    return true;
  }

  bool search(std::size_t depth) {
    if (depth == order_.size()) return true;
    const auto& label = order_[depth];
    const auto& candidates = byColorB_[colorsA_.at(label)];
    for (const auto& candidate : candidates) {
      if (used_.contains(candidate)) continue;
      forward_[label] = candidate;
      used_.insert({candidate, label});
      if (consistent(label) && search(depth + 1)) return true;
      forward_.erase(label);
      used_.erase(candidate);
    }
    return false;
  }

  const Graph& a_;
  const Graph& b_;
  Colors colorsA_;
  Colors colorsB_;
  std::unordered_map<std::string, std::vector<const Triple*>> incident_;
  std::unordered_map<std::uint64_t, std::vector<std::string>> byColorB_;
  std::vector<std::string> order_;
  std::unordered_map<std::string, std::string> forward_;
  std::unordered_map<std::string, std::string> used_;
};

}  // namespace

bool isomorphic(const Graph& a, const Graph& b) {
  if (a.size() != b.size()) return false;
  for (const auto& t : a) {
    if (!t.subject.isBlank() && !t.object.isBlank() && !b.contains(t)) return false;
  }
  int rounds = 4;
  Colors ca = colorGraph(a, rounds);
  Colors cb = colorGraph(b, rounds);
  if (ca.size() != cb.size()) return false;
  std::map<std::uint64_t, int> histogram;
  for (const auto& [_, c] : ca) ++histogram[c];
  for (const auto& [_, c] : cb) --histogram[c];
  for (const auto& [_, n] : histogram) {
    if (n != 0) return false;
  }
  return Matcher(a, b, std::move(ca), std::move(cb)).run();
}

// Blank nodes may be shared between graphs, so the datasets are folded into
// one graph (predicates tagged with their graph name) and matched jointly.
static Graph flatten(const Dataset& d) {
  Graph out = d.defaultGraph;
  for (const auto& [name, g] : d.named) {
    for (const auto& t : g) out.insert(t.subject, Term::iri(t.predicate.value() + '\n' + name), t.object);
  }
  return out;
}

bool isomorphic(const Dataset& a, const Dataset& b) {
  if (a.named.size() != b.named.size()) return false;
  for (const auto& [name, g] : a.named) {
    if (!b.named.contains(name)) return false;
  }
  return isomorphic(flatten(a), flatten(b));
}

}  // namespace facadex::rdf
