#include "facadex/query/functions.hpp"

#include "facadex/error.hpp"

namespace facadex::query {
namespace {

std::int64_t indexOf(const rdf::Term& p, std::string_view fn) {
  auto n = rdf::membershipIndex(p);
  if (!n) {
    throw Error(ErrorKind::Evaluation,
                std::string(fn) + ": not a container membership property: " + p.toNTriples());
  }
  return *n;
}

std::string fxName(std::string_view local) { return std::string(vocab::kFx) + std::string(local); }

}  // namespace

void FunctionRegistry::addFunction(std::string iri, Function fn) {
  if (functions_.contains(iri) || magic_.contains(iri)) {
    throw Error(ErrorKind::Config, "function already registered: " + iri);
  }
  functions_.emplace(std::move(iri), std::move(fn));
}

void FunctionRegistry::addMagicProperty(std::string iri, MagicProperty fn) {
  if (functions_.contains(iri) || magic_.contains(iri)) {
    throw Error(ErrorKind::Config, "function already registered: " + iri);
  }
  magic_.emplace(std::move(iri), std::move(fn));
}

const Function* FunctionRegistry::function(const std::string& iri) const {
  auto it = functions_.find(iri);
  return it == functions_.end() ? nullptr : &it->second;
}

const MagicProperty* FunctionRegistry::magicProperty(const std::string& iri) const {
  auto it = magic_.find(iri);
  return it == magic_.end() ? nullptr : &it->second;
}

const FunctionRegistry& FunctionRegistry::standard() {
  static const FunctionRegistry registry = [] {
    FunctionRegistry r;
    auto arity = [](const std::vector<rdf::Term>& args, std::size_t n, std::string_view fn) {
      if (args.size() != n) {
        throw Error(ErrorKind::Evaluation,
                    std::string(fn) + " expects " + std::to_string(n) + " arguments");
      }
    };
    r.addFunction(fxName("entity"), fxEntity);
    r.addFunction(fxName("literal"), [arity](const std::vector<rdf::Term>& a) {
      arity(a, 2, "fx:literal");
      return fxLiteral(a[0], a[1]);
    });
    r.addFunction(fxName("next"), [arity](const std::vector<rdf::Term>& a) {
      arity(a, 1, "fx:next");
      return fxNext(a[0]);
    });
    r.addFunction(fxName("prev"), [arity](const std::vector<rdf::Term>& a) {
      arity(a, 1, "fx:prev");
      return fxPrev(a[0]);
    });
    r.addFunction(fxName("before"), [arity](const std::vector<rdf::Term>& a) {
      arity(a, 2, "fx:before");
      return rdf::Term::boolean(fxBefore(a[0], a[1]));
    });
    r.addFunction(fxName("after"), [arity](const std::vector<rdf::Term>& a) {
      arity(a, 2, "fx:after");
      return rdf::Term::boolean(fxAfter(a[0], a[1]));
    });
    r.addMagicProperty(std::string(vocab::kFxAnySlot), anySlotMatch);
    return r;
  }();
  return registry;
}

rdf::Term fxEntity(const std::vector<rdf::Term>& args) {
  if (args.empty()) throw Error(ErrorKind::Evaluation, "fx:entity needs at least one argument");
  std::string iri;
  for (const auto& a : args) {
    if (a.isBlank()) throw Error(ErrorKind::Evaluation, "fx:entity: blank node argument");
    iri += a.value();
  }
  if (!rdf::hasScheme(iri)) {
    throw Error(ErrorKind::Evaluation, "fx:entity: not an absolute IRI: " + iri);
  }
  return rdf::Term::iri(std::move(iri));
}

rdf::Term fxLiteral(const rdf::Term& lexical, const rdf::Term& spec) {
  if (!lexical.isLiteral()) throw Error(ErrorKind::Evaluation, "fx:literal: lexical form must be a literal");
  if (spec.isIri()) return rdf::Term::literal(lexical.value(), spec.value());
  if (spec.isPlainString() && !spec.value().empty()) {
    return rdf::Term::langLiteral(lexical.value(), spec.value());
  }
  throw Error(ErrorKind::Evaluation, "fx:literal: expected a datatype IRI or a language tag");
}

rdf::Term fxNext(const rdf::Term& p) { return rdf::mkContainerMembership(indexOf(p, "fx:next") + 1); }

rdf::Term fxPrev(const rdf::Term& p) {
  auto n = indexOf(p, "fx:prev");
  if (n < 2) throw Error(ErrorKind::Evaluation, "fx:prev: rdf:_1 has no predecessor");
  return rdf::mkContainerMembership(n - 1);
}

bool fxBefore(const rdf::Term& a, const rdf::Term& b) {
  return indexOf(a, "fx:before") < indexOf(b, "fx:before");
}

bool fxAfter(const rdf::Term& a, const rdf::Term& b) {
  return indexOf(a, "fx:after") > indexOf(b, "fx:after");
}

void anySlotMatch(const rdf::Graph& g, const std::optional<rdf::Term>& s,
                  const std::optional<rdf::Term>& o,
                  const std::function<void(const rdf::Term&, const rdf::Term&)>& emit) {
  g.match(s ? &*s : nullptr, nullptr, o ? &*o : nullptr, [&](const rdf::Triple& t) {
    if (rdf::membershipIndex(t.predicate)) emit(t.subject, t.object);
  });
}

}  // namespace facadex::query
