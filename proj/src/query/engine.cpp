#include "facadex/query/engine.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <unordered_map>

#include "expr.hpp"
#include "facadex/config/options.hpp"
#include "facadex/error.hpp"
#include "facadex/log.hpp"
#include "facadex/query/parser.hpp"
#include "facadex/triplify/triplifiers.hpp"

namespace facadex::query {
namespace {

using Solutions = std::vector<Solution>;
using Clock = std::chrono::steady_clock;

bool compatible(const Solution& a, const Solution& b) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const auto& [k, v] : small) {
    auto it = large.find(k);
    if (it != large.end() && it->second != v) return false;
  }
  return true;
}

bool sharesVariable(const Solution& a, const Solution& b) {
  for (const auto& [k, v] : a) {
    if (b.contains(k)) return true;
  }
  return false;
}

Solution merge(Solution a, const Solution& b) {
  for (const auto& [k, v] : b) a.emplace(k, v);
  return a;
}

// Service clause with its inline configuration split out.
struct PreparedService {
  config::FacadeOptions fixed;
  std::map<std::string, std::string> variableBound;
  Group residual;
  std::vector<TriplePattern> filterPatterns;
};

PreparedService prepareService(const Service& s) {
  PreparedService out;
  for (const auto& element : s.inner->elements) {
    const auto* bgp = std::get_if<Bgp>(&element.node);
    if (!bgp) {
      out.residual.elements.push_back(element);
      continue;
    }
    auto inline_ = config::extractInlineProperties(bgp->triples);
    out.fixed = config::mergeOptions(out.fixed, inline_.fixed);
    for (auto& [name, var] : inline_.variableBound) out.variableBound[name] = var;
    out.residual.elements.push_back(Pattern{Bgp{std::move(inline_.residual)}});
  }
  out.residual.filters = s.inner->filters;
  out.filterPatterns = collectTriplePatterns(out.residual);
  return out;
}

std::string termText(const rdf::Term& t) { return t.value(); }

class Evaluator {
 public:
  Evaluator(const EngineOptions& options, std::optional<Clock::time_point> deadline)
      : options_(options), exprs_(*options.registry), deadline_(deadline) {}

  const detail::ExprEvaluator& exprs() const { return exprs_; }

  Solutions group(const Group& g, Solutions input, const rdf::Graph& graph) {
    std::vector<const Service*> deferred;
    Solutions current = std::move(input);
    for (std::size_t i = 0; i < g.elements.size(); ++i) {
      const auto& element = g.elements[i];
      if (const auto* svc = std::get_if<Service>(&element.node)) {
        bool last = i + 1 == g.elements.size();
        if (!last && missingConfig(*svc, current)) {
          deferred.push_back(svc);
          continue;
        }
      }
      current = evalElement(element, std::move(current), graph);
    }
    for (const auto* svc : deferred) current = service(*svc, std::move(current), graph);
    if (!g.filters.empty()) {
      std::erase_if(current, [&](const Solution& row) {
        for (const auto& f : g.filters) {
          auto ok = exprs_.test(f, row);
          if (!ok || !*ok) return true;
        }
        return false;
      });
    }
    return current;
  }

  void checkDeadline() {
    if (deadline_ && (++ticks_ & 0x3FF) == 0 && Clock::now() > *deadline_) {
      throw Error(ErrorKind::Timeout, "query exceeded its time limit");
    }
  }

 private:
  Solutions evalElement(const Pattern& p, Solutions input, const rdf::Graph& graph) {
    return std::visit(
        [&](const auto& node) -> Solutions {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Bgp>) {
            return bgp(node.triples, std::move(input), graph);
          } else if constexpr (std::is_same_v<T, Group>) {
            return group(node, std::move(input), graph);
          } else if constexpr (std::is_same_v<T, OptionalPattern>) {
            Solutions out;
            for (auto& row : input) {
              auto matched = group(*node.inner, {row}, graph);
              if (matched.empty()) {
                out.push_back(std::move(row));
              } else {
                std::move(matched.begin(), matched.end(), std::back_inserter(out));
              }
            }
            return out;
          } else if constexpr (std::is_same_v<T, UnionPattern>) {
            Solutions out;
            for (const auto& branch : node.branches) {
              auto part = group(*branch, input, graph);
              std::move(part.begin(), part.end(), std::back_inserter(out));
            }
            return out;
          } else if constexpr (std::is_same_v<T, MinusPattern>) {
            auto right = group(*node.inner, {Solution{}}, graph);
            std::erase_if(input, [&](const Solution& row) {
              return std::any_of(right.begin(), right.end(), [&](const Solution& r) {
                return sharesVariable(row, r) && compatible(row, r);
              });
            });
            return input;
          } else if constexpr (std::is_same_v<T, Bind>) {
            for (auto& row : input) {
              if (row.contains(node.var.name)) continue;
              if (auto v = exprs_.eval(node.expr, row)) row.emplace(node.var.name, std::move(*v));
            }
            return input;
          } else if constexpr (std::is_same_v<T, Values>) {
            Solutions out;
            for (const auto& row : input) {
              for (const auto& values : node.rows) {
                Solution extra;
                for (std::size_t i = 0; i < node.vars.size(); ++i) {
                  if (values[i]) extra.emplace(node.vars[i].name, *values[i]);
                }
                if (compatible(row, extra)) out.push_back(merge(row, extra));
              }
            }
            return out;
          } else {
            return service(node, std::move(input), graph);
          }
        },
        p.node);
  }

  // ---------------------------------------------------------------- BGP

  struct Resolved {
    const rdf::Term* term = nullptr;  // constant or bound value
    const std::string* var = nullptr; // unbound variable to bind
  };

  static Resolved resolveSlot(const PatternTerm& t, const Solution& row) {
    if (!isVar(t)) return {&asTerm(t), nullptr};
    auto it = row.find(asVar(t).name);
    if (it != row.end()) return {&it->second, nullptr};
    return {nullptr, &asVar(t).name};
  }

  static int boundCount(const TriplePattern& tp, const Solution& row) {
    int n = 0;
    for (const auto* t : {&tp.subject, &tp.predicate, &tp.object}) {
      if (!isVar(*t) || row.contains(asVar(*t).name)) ++n;
    }
    return n;
  }

  Solutions bgp(const std::vector<TriplePattern>& patterns, Solutions input, const rdf::Graph& graph) {
    if (patterns.empty()) return input;
    Solutions out;
    std::vector<bool> done(patterns.size(), false);
    for (auto& row : input) matchRest(patterns, done, patterns.size(), row, graph, out);
    return out;
  }

  void matchRest(const std::vector<TriplePattern>& patterns, std::vector<bool>& done,
                 std::size_t remaining, Solution& row, const rdf::Graph& graph, Solutions& out) {
    checkDeadline();
    if (remaining == 0) {
      out.push_back(row);
      return;
    }
    std::size_t best = patterns.size();
    int bestScore = -1;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      if (done[i]) continue;
      int score = boundCount(patterns[i], row);
      if (score > bestScore) {
        best = i;
        bestScore = score;
      }
    }
    const auto& tp = patterns[best];
    done[best] = true;
    auto s = resolveSlot(tp.subject, row);
    auto p = resolveSlot(tp.predicate, row);
    auto o = resolveSlot(tp.object, row);

    // Binds unbound positions, recurses, then restores the row.
    auto onMatch = [&](const rdf::Term& ts, const rdf::Term* tpred, const rdf::Term& to) {
      std::vector<const std::string*> added;
      auto bind = [&](const std::string* var, const rdf::Term& value) {
        if (!var) return true;
        auto [it, inserted] = row.emplace(*var, value);
        if (inserted) {
          added.push_back(var);
          return true;
        }
        return it->second == value;
      };
      if (bind(s.var, ts) && (!tpred || bind(p.var, *tpred)) && bind(o.var, to)) {
        matchRest(patterns, done, remaining - 1, row, graph, out);
      }
      for (const auto* v : added) row.erase(*v);
    };

    const MagicProperty* magic =
        p.term && p.term->isIri() ? options_.registry->magicProperty(p.term->value()) : nullptr;
    if (magic) {
      std::optional<rdf::Term> sv = s.term ? std::optional(*s.term) : std::nullopt;
      std::optional<rdf::Term> ov = o.term ? std::optional(*o.term) : std::nullopt;
      std::vector<std::pair<rdf::Term, rdf::Term>> matches;
      (*magic)(graph, sv, ov, [&](const rdf::Term& a, const rdf::Term& b) { matches.emplace_back(a, b); });
      for (const auto& [ms, mo] : matches) onMatch(ms, nullptr, mo);
    } else {
      std::vector<const rdf::Triple*> matches;
      graph.match(s.term, p.term, o.term, [&](const rdf::Triple& t) { matches.push_back(&t); });
      for (const auto* t : matches) onMatch(t->subject, &t->predicate, t->object);
    }
    done[best] = false;
  }

  // ---------------------------------------------------------------- SERVICE

  std::vector<std::string> configVariables(const Service& s) {
    std::vector<std::string> vars;
    if (isVar(s.target)) vars.push_back(asVar(s.target).name);
    for (const auto& element : s.inner->elements) {
      const auto* bgp = std::get_if<Bgp>(&element.node);
      if (!bgp) continue;
      for (const auto& tp : bgp->triples) {
        if (!isVar(tp.subject) && asTerm(tp.subject).isIri() &&
            asTerm(tp.subject).value() == vocab::kFxProperties && isVar(tp.object)) {
          vars.push_back(asVar(tp.object).name);
        }
      }
    }
    return vars;
  }

  bool missingConfig(const Service& s, const Solutions& rows) {
    auto vars = configVariables(s);
    if (vars.empty()) return false;
    return std::any_of(rows.begin(), rows.end(), [&](const Solution& row) {
      return std::any_of(vars.begin(), vars.end(), [&](const std::string& v) { return !row.contains(v); });
    });
  }

  const PreparedService& prepared(const Service& s) {
    auto it = prepared_.find(&s);
    if (it == prepared_.end()) it = prepared_.emplace(&s, prepareService(s)).first;
    return it->second;
  }

  config::FacadeOptions serviceOptions(const Service& s, const PreparedService& prep, const Solution& row,
                                       std::string& iriText) {
    rdf::Term target;
    if (isVar(s.target)) {
      auto it = row.find(asVar(s.target).name);
      if (it == row.end()) {
        throw Error(ErrorKind::UnresolvedService, "target variable is never bound");
      }
      target = it->second;
    } else {
      target = asTerm(s.target);
    }
    iriText = target.value();
    if (!target.isIri() || !target.value().starts_with(vocab::kServiceScheme)) {
      throw Error(ErrorKind::UnsupportedEndpoint,
                  "only " + std::string(vocab::kServiceScheme) + " services are supported: " +
                      target.toNTriples());
    }
    auto parsed = config::parseServiceIri(target.value());
    auto fromIri = parsed.options;
    if (parsed.source) fromIri.set(parsed.source->optionName(), parsed.source->value);
    auto inlineOpts = prep.fixed;
    for (const auto& [name, var] : prep.variableBound) {
      auto it = row.find(var);
      if (it == row.end()) {
        throw Error(ErrorKind::UnresolvedService, "configuration variable ?" + var + " is unbound");
      }
      inlineOpts.set(name, termText(it->second));
    }
    auto merged = config::mergeOptions(fromIri, inlineOpts);
    for (const auto& w : config::validateOptions(merged)) log::warn(w);
    return merged;
  }

  Solutions service(const Service& s, Solutions input, const rdf::Graph&) {
    const auto& prep = prepared(s);
    std::map<std::string, std::shared_ptr<const rdf::Graph>> cache;
    Solutions out;
    for (auto& row : input) {
      checkDeadline();
      std::string iriText;
      try {
        auto options = serviceOptions(s, prep, row, iriText);
        auto spec = options.source();
        if (!spec) throw Error(ErrorKind::NoSource, "no location, content or command given");
        triplify::TripleFilter filter;
        if (options.getOr(config::opt::kStrategy, "1") == "1") filter = buildTripleFilter(prep.filterPatterns);
        if (options.getBool(config::opt::kSlice, false)) {
          auto source = resolve::resolve(*spec, options, options_.policy);
          triplify::forEachSlice(source, options, filter, [&](rdf::Graph&& unit) {
            auto part = group(prep.residual, {row}, unit);
            std::move(part.begin(), part.end(), std::back_inserter(out));
          });
          continue;
        }
        auto key = config::encodeServiceIri(options.withoutSource(), spec);
        auto& graph = cache[key];
        if (!graph) {
          auto source = resolve::resolve(*spec, options, options_.policy);
          graph = std::make_shared<const rdf::Graph>(triplify::triplify(source, options, filter));
        }
        auto part = group(prep.residual, {row}, *graph);
        std::move(part.begin(), part.end(), std::back_inserter(out));
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Timeout) throw;
        if (s.silent) {
          log::debug(std::string("SERVICE SILENT dropped a row: ") + e.what());
          continue;
        }
        auto where = !iriText.empty()      ? "SERVICE <" + iriText + ">"
                     : isVar(s.target) ? "SERVICE ?" + asVar(s.target).name
                                       : std::string("SERVICE");
        throw Error(e.kind(), where + ": " + e.what());
      }
    }
    return out;
  }

  const EngineOptions& options_;
  detail::ExprEvaluator exprs_;
  std::optional<Clock::time_point> deadline_;
  std::uint64_t ticks_ = 0;
  std::map<const Service*, PreparedService> prepared_;
};

// Variables in order of first appearance, for SELECT *.
void collectVariables(const Group& g, std::vector<std::string>& out, std::set<std::string>& seen) {
  auto add = [&](const std::string& name) {
    if (!name.empty() && name[0] != '.' && seen.insert(name).second) out.push_back(name);
  };
  auto addTerm = [&](const PatternTerm& t) {
    if (isVar(t)) add(asVar(t).name);
  };
  for (const auto& element : g.elements) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Bgp>) {
            for (const auto& tp : node.triples) {
              addTerm(tp.subject);
              addTerm(tp.predicate);
              addTerm(tp.object);
            }
          } else if constexpr (std::is_same_v<T, Group>) {
            collectVariables(node, out, seen);
          } else if constexpr (std::is_same_v<T, OptionalPattern>) {
            collectVariables(*node.inner, out, seen);
          } else if constexpr (std::is_same_v<T, UnionPattern>) {
            for (const auto& b : node.branches) collectVariables(*b, out, seen);
          } else if constexpr (std::is_same_v<T, MinusPattern>) {
            // Variables of MINUS never reach the result.
          } else if constexpr (std::is_same_v<T, Bind>) {
            add(node.var.name);
          } else if constexpr (std::is_same_v<T, Values>) {
            for (const auto& v : node.vars) add(v.name);
          } else {
            addTerm(node.target);
            collectVariables(*node.inner, out, seen);
          }
        },
        element.node);
  }
}

void applyOrder(const Query& q, Solutions& rows, const detail::ExprEvaluator& exprs) {
  if (q.orderBy.empty()) return;
  std::vector<std::pair<std::vector<std::optional<rdf::Term>>, std::size_t>> keyed;
  keyed.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::optional<rdf::Term>> keys;
    for (const auto& k : q.orderBy) keys.push_back(exprs.eval(k.expr, rows[i]));
    keyed.emplace_back(std::move(keys), i);
  }
  std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    for (std::size_t k = 0; k < q.orderBy.size(); ++k) {
      int c = detail::compareForOrder(a.first[k], b.first[k]);
      if (c != 0) return q.orderBy[k].descending ? c > 0 : c < 0;
    }
    return false;
  });
  Solutions sorted;
  sorted.reserve(rows.size());
  for (const auto& [keys, i] : keyed) sorted.push_back(std::move(rows[i]));
  rows = std::move(sorted);
}

void applySlice(const Query& q, Solutions& rows) {
  if (q.offset >= rows.size()) {
    rows.clear();
  } else if (q.offset > 0) {
    rows.erase(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(q.offset));
  }
  if (q.limit && rows.size() > *q.limit) rows.resize(*q.limit);
}

std::optional<rdf::Term> instantiate(const PatternTerm& t, const Solution& row, std::size_t rowIndex) {
  if (isVar(t)) {
    auto it = row.find(asVar(t).name);
    if (it == row.end()) return std::nullopt;
    return it->second;
  }
  const auto& term = asTerm(t);
  if (term.isBlank()) return rdf::Term::blank("c" + std::to_string(rowIndex) + "_" + term.value());
  return term;
}

}  // namespace

std::vector<TriplePattern> collectTriplePatterns(const Group& group) {
  std::vector<TriplePattern> out;
  for (const auto& element : group.elements) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          auto addGroup = [&](const Group& g) {
            auto inner = collectTriplePatterns(g);
            out.insert(out.end(), inner.begin(), inner.end());
          };
          if constexpr (std::is_same_v<T, Bgp>) {
            out.insert(out.end(), node.triples.begin(), node.triples.end());
          } else if constexpr (std::is_same_v<T, Group>) {
            addGroup(node);
          } else if constexpr (std::is_same_v<T, OptionalPattern> || std::is_same_v<T, MinusPattern>) {
            addGroup(*node.inner);
          } else if constexpr (std::is_same_v<T, UnionPattern>) {
            for (const auto& b : node.branches) addGroup(*b);
          }
        },
        element.node);
  }
  return out;
}

triplify::TripleFilter buildTripleFilter(std::vector<TriplePattern> patterns) {
  return [patterns = std::move(patterns)](const rdf::Triple& t) {
    auto fits = [](const PatternTerm& pt, const rdf::Term& value) {
      return isVar(pt) || asTerm(pt) == value;
    };
    for (const auto& tp : patterns) {
      bool predicateFits = fits(tp.predicate, t.predicate) ||
                           (!isVar(tp.predicate) && asTerm(tp.predicate).value() == vocab::kFxAnySlot &&
                            rdf::membershipIndex(t.predicate));
      if (predicateFits && fits(tp.subject, t.subject) && fits(tp.object, t.object)) return true;
    }
    return false;
  };
}

QueryResult execute(const Query& query, const rdf::Dataset& base, const EngineOptions& options) {
  std::optional<Clock::time_point> deadline;
  if (options.timeout) deadline = Clock::now() + *options.timeout;
  Evaluator evaluator(options, deadline);
  auto rows = evaluator.group(query.where, {Solution{}}, base.defaultGraph);
  const auto& exprs = evaluator.exprs();

  QueryResult result;
  result.form = query.form;
  switch (query.form) {
    case QueryForm::Ask:
      result.boolean = !rows.empty();
      return result;
    case QueryForm::Construct: {
      applyOrder(query, rows, exprs);
      applySlice(query, rows);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& tp : query.constructTemplate) {
          auto s = instantiate(tp.subject, rows[i], i);
          auto p = instantiate(tp.predicate, rows[i], i);
          auto o = instantiate(tp.object, rows[i], i);
          if (!s || !p || !o || s->isLiteral() || !p->isIri()) continue;
          result.graph.insert(std::move(*s), std::move(*p), std::move(*o));
        }
      }
      return result;
    }
    case QueryForm::Select: break;
  }

  for (const auto& proj : query.projection) {
    if (!proj.expr) continue;
    for (auto& row : rows) {
      if (row.contains(proj.var.name)) continue;
      if (auto v = exprs.eval(*proj.expr, row)) row.emplace(proj.var.name, std::move(*v));
    }
  }
  applyOrder(query, rows, exprs);

  auto& vars = result.solutions.variables;
  if (query.selectAll) {
    std::set<std::string> seen;
    collectVariables(query.where, vars, seen);
  } else {
    for (const auto& proj : query.projection) vars.push_back(proj.var.name);
  }
  for (auto& row : rows) {
    Solution projected;
    for (const auto& v : vars) {
      auto it = row.find(v);
      if (it != row.end()) projected.emplace(v, std::move(it->second));
    }
    row = std::move(projected);
  }
  if (query.distinct) {
    std::set<Solution> seen;
    std::erase_if(rows, [&](const Solution& row) { return !seen.insert(row).second; });
  }
  applySlice(query, rows);
  result.solutions.rows = std::move(rows);
  return result;
}

QueryResult execute(std::string_view queryText, const rdf::Dataset& base, const EngineOptions& options) {
  return execute(parseQuery(queryText), base, options);
}

}  // namespace facadex::query
