#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "facadex/rdf/graph.hpp"

namespace facadex::query {

struct Var {
  std::string name;

  // Blank nodes in query patterns become variables with a '.' prefix, which
  // no SPARQL variable name can contain. They never appear in SELECT *.
  bool isAnonymous() const { return !name.empty() && name[0] == '.'; }

  auto operator<=>(const Var&) const = default;
  bool operator==(const Var&) const = default;
};

using PatternTerm = std::variant<rdf::Term, Var>;

inline bool isVar(const PatternTerm& t) { return std::holds_alternative<Var>(t); }
inline const Var& asVar(const PatternTerm& t) { return std::get<Var>(t); }
inline const rdf::Term& asTerm(const PatternTerm& t) { return std::get<rdf::Term>(t); }

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;

  bool operator==(const TriplePattern&) const = default;
};

// Expressions form a small tree. Operators and builtins are Function nodes
// named by their SPARQL keyword ("&&", "=", "CONCAT", "REGEX", ...); custom
// functions are named by their full IRI.
struct Expr {
  enum class Kind { Constant, Variable, Function };

  Kind kind = Kind::Constant;
  rdf::Term constant;
  std::string name;
  std::vector<Expr> args;

  static Expr makeConstant(rdf::Term t) {
    Expr e;
    e.kind = Kind::Constant;
    e.constant = std::move(t);
    return e;
  }
  static Expr makeVariable(std::string name) {
    Expr e;
    e.kind = Kind::Variable;
    e.name = std::move(name);
    return e;
  }
  static Expr makeCall(std::string name, std::vector<Expr> args) {
    Expr e;
    e.kind = Kind::Function;
    e.name = std::move(name);
    e.args = std::move(args);
    return e;
  }
};

struct Pattern;

struct Bgp {
  std::vector<TriplePattern> triples;
};

// Elements are evaluated left to right; each one consumes the solutions
// produced so far. Filters apply to the group's final solutions.
struct Group {
  std::vector<Pattern> elements;
  std::vector<Expr> filters;
};

struct OptionalPattern {
  std::shared_ptr<const Group> inner;
};

struct UnionPattern {
  std::vector<std::shared_ptr<const Group>> branches;
};

struct MinusPattern {
  std::shared_ptr<const Group> inner;
};

struct Bind {
  Expr expr;
  Var var;
};

struct Values {
  std::vector<Var> vars;
  std::vector<std::vector<std::optional<rdf::Term>>> rows;
};

struct Service {
  PatternTerm target;
  bool silent = false;
  std::shared_ptr<const Group> inner;
};

struct Pattern {
  std::variant<Bgp, Group, OptionalPattern, UnionPattern, MinusPattern, Bind, Values, Service>
      node;
};

enum class QueryForm { Select, Construct, Ask };

struct Projection {
  Var var;
  std::optional<Expr> expr;
};

struct OrderKey {
  Expr expr;
  bool descending = false;
};

struct Query {
  QueryForm form = QueryForm::Select;
  std::map<std::string, std::string> prefixes;
  bool distinct = false;
  bool selectAll = false;
  std::vector<Projection> projection;
  std::vector<TriplePattern> constructTemplate;
  Group where;
  std::vector<OrderKey> orderBy;
  std::optional<std::size_t> limit;
  std::size_t offset = 0;
};

}  // namespace facadex::query
