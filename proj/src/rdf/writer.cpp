#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>

#include "facadex/rdf/io.hpp"

namespace facadex::rdf {
namespace {

struct Prefix {
  std::string_view name;
  std::string_view iri;
};

constexpr std::array<Prefix, 5> kWellKnown{{
    {"rdf", vocab::kRdf},
    {"rdfs", vocab::kRdfs},
    {"xsd", vocab::kXsd},
    {"fx", vocab::kFx},
    {"xyz", vocab::kXyz},
}};

bool isLocalNameChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

bool isSafeLocalName(std::string_view local) {
  if (local.empty()) return true;
  if (local[0] == '-') return false;
  return std::all_of(local.begin(), local.end(), isLocalNameChar);
}

class TurtleWriter {
 public:
  explicit TurtleWriter(const Graph& graph) : graph_(graph) {}

  std::string write() {
    collectPrefixes();
    std::string out;
    for (const auto* p : used_) {
      out += "@prefix " + std::string(p->name) + ": <" + std::string(p->iri) + "> .\n";
    }
    if (!used_.empty() && !graph_.empty()) out += "\n";

    // Group by subject in first-appearance order.
    std::vector<Term> subjects;
    std::map<Term, std::vector<const Triple*>> bySubject;
    for (const auto& t : graph_) {
      auto& list = bySubject[t.subject];
      if (list.empty()) subjects.push_back(t.subject);
      list.push_back(&t);
    }
    for (const auto& s : subjects) {
      const auto& list = bySubject[s];
      out += term(s);
      for (std::size_t i = 0; i < list.size(); ++i) {
        const auto* t = list[i];
        bool samePredicate = i > 0 && list[i - 1]->predicate == t->predicate;
        if (i == 0) {
          out += " " + predicate(t->predicate) + " ";
        } else if (samePredicate) {
          out += ", ";
        } else {
          out += " ;\n    " + predicate(t->predicate) + " ";
        }
        out += term(t->object);
      }
      out += " .\n";
    }
    return out;
  }

 private:
  const Prefix* prefixFor(std::string_view iri) const {
    for (const auto& p : kWellKnown) {
      if (iri.starts_with(p.iri) && isSafeLocalName(iri.substr(p.iri.size()))) return &p;
    }
    return nullptr;
  }

  void note(std::string_view iri) {
    if (const auto* p = prefixFor(iri)) used_.insert(p);
  }

  void collectPrefixes() {
    for (const auto& t : graph_) {
      for (const Term* x : {&t.subject, &t.predicate, &t.object}) {
        if (x->isIri()) note(x->value());
        if (x->isLiteral() && !x->hasLanguage() && x->datatype() != vocab::kXsdString)
          note(x->datatype());
      }
    }
  }

  std::string iri(std::string_view value) const {
    if (const auto* p = prefixFor(value)) {
      return std::string(p->name) + ":" + std::string(value.substr(p->iri.size()));
    }
    return "<" + std::string(value) + ">";
  }

  std::string predicate(const Term& p) const {
    if (p.value() == vocab::kRdfType) return "a";
    return iri(p.value());
  }

  std::string term(const Term& t) const {
    switch (t.kind()) {
      case TermKind::Iri: return iri(t.value());
      case TermKind::Blank: return "_:" + t.value();
      case TermKind::Literal: {
        std::string out = "\"" + escapeLiteral(t.value()) + "\"";
        if (t.hasLanguage()) return out + "@" + t.language();
        if (t.datatype() != vocab::kXsdString) out += "^^" + iri(t.datatype());
        return out;
      }
    }
    return {};
  }

  struct ByName {
    bool operator()(const Prefix* a, const Prefix* b) const { return a->name < b->name; }
  };

  const Graph& graph_;
  std::set<const Prefix*, ByName> used_;
};

std::string ntLines(const Graph& graph, const std::string& graphSuffix) {
  std::string out;
  for (const auto& t : graph) {
    out += t.subject.toNTriples();
    out += ' ';
    out += t.predicate.toNTriples();
    out += ' ';
    out += t.object.toNTriples();
    out += graphSuffix;
    out += " .\n";
  }
  return out;
}

}  // namespace

std::optional<RdfFormat> rdfFormatFromName(std::string_view name) {
  std::string upper;
  for (char c : name) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "NT" || upper == "N-TRIPLES" || upper == "NTRIPLES") return RdfFormat::NTriples;
  if (upper == "TTL" || upper == "TURTLE") return RdfFormat::Turtle;
  if (upper == "NQ" || upper == "N-QUADS" || upper == "NQUADS") return RdfFormat::NQuads;
  return std::nullopt;
}

std::optional<RdfFormat> rdfFormatFromPath(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".nt") return RdfFormat::NTriples;
  if (ext == ".ttl") return RdfFormat::Turtle;
  if (ext == ".nq") return RdfFormat::NQuads;
  return std::nullopt;
}

std::string_view mediaTypeOf(RdfFormat format) {
  switch (format) {
    case RdfFormat::NTriples: return "application/n-triples";
    case RdfFormat::Turtle: return "text/turtle";
    case RdfFormat::NQuads: return "application/n-quads";
  }
  return "text/plain";
}

std::string serialize(const Graph& graph, RdfFormat format) {
  if (format == RdfFormat::Turtle) return TurtleWriter(graph).write();
  return ntLines(graph, "");
}

std::string serialize(const Dataset& dataset, RdfFormat format) {
  if (format != RdfFormat::NQuads) return serialize(dataset.defaultGraph, format);
  std::string out = ntLines(dataset.defaultGraph, "");
  for (const auto& [name, graph] : dataset.named) {
    out += ntLines(graph, " <" + name + ">");
  }
  return out;
}

}  // namespace facadex::rdf
