// Acceptance criteria 1-10. Prints one line per criterion and exits non-zero
// when any of them fails.
#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "facadex/cli/results.hpp"
#include "facadex/cli/run.hpp"
#include "facadex/endpoint/server.hpp"
#include "facadex/error.hpp"
#include "facadex/query/engine.hpp"
#include "facadex/rdf/vocab.hpp"
#include "facadex/resolve/source.hpp"
#include "facadex/triplify/triplifiers.hpp"
#include "facadex/util/text.hpp"
#include "testing.hpp"

namespace fx = facadex;
using fx::config::FacadeOptions;
using fx::testing::fixture;
using fx::testing::nt;
using fx::testing::slurp;
using fx::testing::ttl;

namespace {

struct Failure {
  std::string detail;
};

void require(bool ok, const std::string& detail) {
  if (!ok) throw Failure{detail};
}

const std::string kQueryPrefixes =
    "PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>\n"
    "PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>\n"
    "PREFIX fx: <http://sparql.xyz/facade-x/ns/>\n"
    "PREFIX xyz: <http://sparql.xyz/facade-x/data/>\n"
    "PREFIX ex: <http://ex.org/>\n";

// Rows as sorted "?v=<nt>" lines, so two results compare as multisets.
std::vector<std::string> rowMultiset(const fx::query::QueryResult& r) {
  std::vector<std::string> out;
  for (const auto& row : r.solutions.rows) {
    std::string line;
    for (const auto& [name, term] : row) line += "?" + name + "=" + term.toNTriples() + " ";
    out.push_back(line);
  }
  std::sort(out.begin(), out.end());
  return out;
}

fx::rdf::Graph tri(std::string_view content, std::string_view mediaType, const FacadeOptions& o = {}) {
  return fx::triplify::triplifyContent(content, mediaType, o);
}

fx::rdf::Graph triFile(std::string_view relative, const FacadeOptions& o = {}) {
  auto spec = fx::config::SourceSpec::location(fixture(relative).string());
  return fx::triplify::triplify(fx::resolve::resolve(spec, o), o);
}

void requireIso(const fx::rdf::Graph& actual, const fx::rdf::Graph& expected, const std::string& what) {
  require(fx::rdf::isomorphic(actual, expected), what + ": got\n" + nt(actual) + "want\n" + nt(expected));
}

std::string sparqlString(std::string_view s) { return "\"" + fx::rdf::escapeLiteral(s) + "\""; }

// ----------------------------------------------------------------- 1

void goldenGraphs() {
  requireIso(triFile("golden/tate.csv", {{"csv.headers", "true"}}),
             ttl("[ a fx:root ; rdf:_1 [ xyz:id \"1035\" ; xyz:accession_number \"A00001\" ;"
                 " xyz:title \"A Figure Bowling\" ] ] ."),
             "csv");
  requireIso(triFile("golden/malevich.json"),
             ttl("[] a fx:root ; xyz:fc \"Kazimir Malevich\" ; xyz:gender \"Male\" ; xyz:id \"1561\"^^xsd:int ;"
                 " xyz:activePlaces [ rdf:_1 \"Ukrayina\" ; rdf:_2 \"Moskov\" ] ."),
             "json");
  requireIso(triFile("golden/lorem.txt"), ttl("[] a fx:root ; rdf:_1 \"lorem ipsum ...\"^^xsd:string ."), "text");
  requireIso(triFile("golden/sparql-anything.md"),
             ttl("[] a fx:root , xyz:Document ;"
                 " rdf:_1 [ a xyz:Heading ; rdf:_1 \"SPARQL Anything\" ; xyz:level \"1\"^^xsd:int ] ;"
                 " rdf:_2 [ a xyz:Paragraph ; rdf:_1 \"SPARQL Anything is a system for Semantic Web re-engineering"
                 " that\\nallows users to ... query anything with SPARQL.\" ] ."),
             "markdown");
}

// ----------------------------------------------------------------- 2

std::string figureOneQuery() { return slurp(fixture("figure1/arts-and-subjects.sparql")); }

fx::rdf::Graph figureOneOracle() {
  return fx::rdf::parseGraph(slurp(fixture("figure1/expected.ttl")), fx::rdf::RdfFormat::Turtle);
}

std::string figureOnePipeline() {
  fx::testing::ScopedCwd cwd(fixture("figure1"));
  auto start = std::chrono::steady_clock::now();
  auto r = fx::query::execute(figureOneQuery(), fx::rdf::Dataset{});
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  requireIso(r.graph, figureOneOracle(), "figure 1");
  require(elapsed < std::chrono::seconds(1), "took " + std::to_string(elapsed.count()) + " ms");
  return std::to_string(r.graph.size()) + " triples in " + std::to_string(elapsed.count()) + " ms";
}

// ----------------------------------------------------------------- 3 and 4

const char* const kWords[] = {"a", "b", "c", "x y", "1"};
const char* const kKeys[] = {"k", "m", "n"};

struct RandomDoc {
  std::string content;
  std::string mediaType;
  bool headers = false;
  int columns = 0;
  std::vector<std::string> words;  // values that occur in the document
};

std::string jsonValue(std::mt19937& rng, int& budget, int depth) {
  --budget;
  int pick = std::uniform_int_distribution<int>(0, depth >= 3 || budget <= 0 ? 2 : 5)(rng);
  if (pick == 0) return "\"" + std::string(kWords[rng() % 5]) + "\"";
  if (pick == 1) return std::to_string(rng() % 3);
  if (pick == 2) return rng() % 4 == 0 ? "null" : "true";
  int n = std::uniform_int_distribution<int>(0, 4)(rng);
  std::string out;
  if (pick <= 3) {
    out = "[";
    for (int i = 0; i < n && budget > 0; ++i) out += (i ? "," : "") + jsonValue(rng, budget, depth + 1);
    return out + "]";
  }
  out = "{";
  for (int i = 0; i < std::min(n, 3) && budget > 0; ++i) {
    out += std::string(i ? "," : "") + "\"" + kKeys[i] + "\":" + jsonValue(rng, budget, depth + 1);
  }
  return out + "}";
}

RandomDoc randomJson(std::mt19937& rng, bool topArray) {
  RandomDoc d;
  d.mediaType = "application/json";
  int budget = 50;
  if (topArray) {
    d.content = "[";
    int n = std::uniform_int_distribution<int>(1, 8)(rng);
    for (int i = 0; i < n && budget > 0; ++i) d.content += (i ? "," : "") + jsonValue(rng, budget, 1);
    d.content += "]";
  } else {
    d.content = jsonValue(rng, budget, 0);
  }
  d.words.assign(std::begin(kWords), std::end(kWords));
  return d;
}

RandomDoc randomCsv(std::mt19937& rng, bool headers) {
  RandomDoc d;
  d.mediaType = "text/csv";
  d.headers = headers;
  d.columns = std::uniform_int_distribution<int>(1, 4)(rng);
  int rows = std::uniform_int_distribution<int>(1, 50 / d.columns - 1)(rng);
  if (headers) {
    for (int c = 0; c < d.columns; ++c) d.content += (c ? "," : "") + ("h" + std::to_string(c));
    d.content += "\n";
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < d.columns; ++c) d.content += (c ? "," : "") + std::string(kWords[rng() % 5]);
    d.content += "\n";
  }
  d.words.assign(std::begin(kWords), std::end(kWords));
  return d;
}

std::string serviceQuery(const RandomDoc& d, const std::string& extra, const std::string& patterns) {
  std::string props = "fx:properties fx:content " + sparqlString(d.content) + " ; fx:media-type \"" + d.mediaType +
                      "\"";
  if (d.headers) props += " ; fx:csv.headers \"true\"";
  return kQueryPrefixes + "SELECT * { SERVICE <x-sparql-anything:" + extra + "> { " + props + " . " + patterns +
         " } }";
}

// Up to three triple patterns; every pattern after the first shares a
// variable with an earlier one, and at most one has a variable predicate.
std::string randomPatterns(std::mt19937& rng, const RandomDoc& d) {
  const std::vector<std::string> vars{"?a", "?b", "?c", "?d"};
  std::vector<std::string> predicates{"rdf:type", "fx:anySlot", "rdf:_1", "rdf:_2", "rdf:_3"};
  if (d.mediaType == "text/csv" && d.headers) {
    for (int c = 0; c < d.columns; ++c) predicates.push_back("xyz:h" + std::to_string(c));
  } else if (d.mediaType == "application/json") {
    for (const char* k : kKeys) predicates.push_back(std::string("xyz:") + k);
  }
  std::vector<std::string> used;
  bool predicateVar = false;
  int n = std::uniform_int_distribution<int>(1, 3)(rng);
  std::string out;
  for (int i = 0; i < n; ++i) {
    std::string s = used.empty() || rng() % 2 ? vars[rng() % vars.size()] : used[rng() % used.size()];
    std::string p;
    if (!predicateVar && rng() % 5 == 0) {
      p = "?p";
      predicateVar = true;
    } else {
      p = predicates[rng() % predicates.size()];
    }
    std::string o;
    switch (rng() % 4) {
      case 0: o = p == "rdf:type" ? "fx:root" : sparqlString(d.words[rng() % d.words.size()]); break;
      case 1: o = used.empty() ? vars[rng() % vars.size()] : used[rng() % used.size()]; break;
      default: o = vars[rng() % vars.size()];
    }
    if (!used.empty() && std::find(used.begin(), used.end(), s) == used.end() &&
        std::find(used.begin(), used.end(), o) == used.end()) {
      s = used[rng() % used.size()];
    }
    for (const auto& t : {s, o}) {
      if (t.starts_with("?")) used.push_back(t);
    }
    out += s + " " + p + " " + o + " . ";
  }
  return out;
}

std::string filterTransparency() {
  std::mt19937 rng(20230301);
  std::size_t nonEmpty = 0;
  for (int trial = 0; trial < 200; ++trial) {
    RandomDoc d = trial % 2 ? randomJson(rng, rng() % 2) : randomCsv(rng, rng() % 2);
    std::string patterns = randomPatterns(rng, d);
    auto filtered = rowMultiset(fx::query::execute(serviceQuery(d, "strategy=1", patterns), {}));
    auto full = rowMultiset(fx::query::execute(serviceQuery(d, "strategy=0", patterns), {}));
    require(filtered == full, "trial " + std::to_string(trial) + ": " + std::to_string(filtered.size()) + " vs " +
                                  std::to_string(full.size()) + " rows for\n" + d.content + "\n" + patterns);
    if (!full.empty()) ++nonEmpty;
  }
  return "200 trials, " + std::to_string(nonEmpty) + " with solutions";
}

std::string perUnitPatterns(std::mt19937& rng, const RandomDoc& d) {
  std::string out = "?root a fx:root ; fx:anySlot ?row . ";
  std::vector<std::string> keys;
  if (d.mediaType == "text/csv") {
    for (int c = 0; c < d.columns; ++c) keys.push_back("xyz:h" + std::to_string(c));
  } else {
    for (const char* k : kKeys) keys.push_back(std::string("xyz:") + k);
  }
  int n = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int i = 0; i < n; ++i) {
    const auto& key = keys[rng() % keys.size()];
    switch (rng() % 3) {
      case 0: out += "?row " + key + " " + sparqlString(d.words[rng() % d.words.size()]) + " . "; break;
      case 1: out += "?row " + key + " ?v" + std::to_string(i) + " . "; break;
      default: out += "?row fx:anySlot ?w" + std::to_string(i) + " . ";
    }
  }
  return out;
}

std::string sliceTransparency() {
  std::mt19937 rng(4180);
  std::size_t rows = 0;
  for (int trial = 0; trial < 100; ++trial) {
    RandomDoc d = trial < 50 ? randomCsv(rng, true) : randomJson(rng, true);
    std::string patterns = perUnitPatterns(rng, d);
    auto sliced = rowMultiset(fx::query::execute(serviceQuery(d, "slice=true", patterns), {}));
    auto whole = rowMultiset(fx::query::execute(serviceQuery(d, "strategy=0", patterns), {}));
    require(sliced == whole, "trial " + std::to_string(trial) + ": " + std::to_string(sliced.size()) + " vs " +
                                 std::to_string(whole.size()) + " rows for\n" + d.content + "\n" + patterns);
    rows += whole.size();
  }
  return "50 CSV + 50 JSON queries, " + std::to_string(rows) + " rows";
}

// ----------------------------------------------------------------- 5

fx::rdf::Term randomNode(std::mt19937& rng, bool objectPosition) {
  int pick = rng() % (objectPosition ? 3 : 2);
  if (pick == 0) return fx::rdf::Term::iri("http://ex.org/s" + std::to_string(rng() % 6));
  if (pick == 1) return fx::rdf::Term::blank("b" + std::to_string(rng() % 3));
  return fx::rdf::Term::literal("l" + std::to_string(rng() % 4));
}

fx::rdf::Graph randomSimpleGraph(std::mt19937& rng) {
  fx::rdf::Graph g;
  int n = std::uniform_int_distribution<int>(0, 100)(rng);
  for (int i = 0; i < n; ++i) {
    g.insert(randomNode(rng, false), fx::rdf::Term::iri("http://ex.org/p" + std::to_string(rng() % 4)),
             randomNode(rng, true));
  }
  return g;
}

struct Slot {
  std::optional<std::string> var;
  fx::rdf::Term constant;
};

using Binding = std::map<std::string, fx::rdf::Term>;

// Nested-loop matcher over the raw triple list.
std::vector<Binding> bruteForce(const fx::rdf::Graph& g, const std::vector<std::array<Slot, 3>>& bgp) {
  std::vector<Binding> current{Binding{}};
  for (const auto& pattern : bgp) {
    std::vector<Binding> next;
    for (const auto& b : current) {
      for (const auto& t : g) {
        const fx::rdf::Term* parts[] = {&t.subject, &t.predicate, &t.object};
        Binding extended = b;
        bool ok = true;
        for (int i = 0; i < 3 && ok; ++i) {
          const Slot& s = pattern[i];
          if (!s.var) {
            ok = s.constant == *parts[i];
          } else if (auto it = extended.find(*s.var); it != extended.end()) {
            ok = it->second == *parts[i];
          } else {
            extended[*s.var] = *parts[i];
          }
        }
        if (ok) next.push_back(std::move(extended));
      }
    }
    current = std::move(next);
  }
  return current;
}

std::string renderSlot(const Slot& s) { return s.var ? "?" + *s.var : s.constant.toNTriples(); }

std::string naiveOracle() {
  std::mt19937 rng(1999);
  std::size_t total = 0;
  const std::vector<std::string> vars{"x", "y", "z", "w"};
  for (int trial = 0; trial < 100; ++trial) {
    auto g = randomSimpleGraph(rng);
    std::vector<std::array<Slot, 3>> bgp;
    int n = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int i = 0; i < n; ++i) {
      std::array<Slot, 3> p;
      p[0] = rng() % 4 ? Slot{vars[rng() % 4], {}} : Slot{std::nullopt, fx::rdf::Term::iri("http://ex.org/s" + std::to_string(rng() % 6))};
      p[1] = rng() % 3 ? Slot{std::nullopt, fx::rdf::Term::iri("http://ex.org/p" + std::to_string(rng() % 4))}
                       : Slot{vars[rng() % 4], {}};
      if (rng() % 3 == 0) {
        auto o = randomNode(rng, true);
        p[2] = o.isBlank() ? Slot{vars[rng() % 4], {}} : Slot{std::nullopt, o};
      } else {
        p[2] = Slot{vars[rng() % 4], {}};
      }
      bgp.push_back(p);
    }
    std::set<std::string> bound;
    for (const auto& p : bgp) {
      for (const auto& s : p) {
        if (s.var) bound.insert(*s.var);
      }
    }
    // Random non-empty projection, DISTINCT and an inequality filter.
    std::vector<std::string> projection;
    for (const auto& v : bound) {
      if (rng() % 3) projection.push_back(v);
    }
    if (projection.empty()) projection.assign(bound.begin(), bound.end());
    bool distinct = rng() % 3 == 0;
    std::optional<std::pair<std::string, std::string>> notEqual;
    if (bound.size() >= 2 && rng() % 3 == 0) {
      notEqual.emplace(*bound.begin(), *std::next(bound.begin()));
    }

    std::string query = "SELECT " + std::string(distinct ? "DISTINCT " : "");
    for (const auto& v : projection) query += "?" + v + " ";
    if (projection.empty()) query += "* ";
    query += "{ ";
    for (const auto& p : bgp) query += renderSlot(p[0]) + " " + renderSlot(p[1]) + " " + renderSlot(p[2]) + " . ";
    if (notEqual) query += "FILTER(?" + notEqual->first + " != ?" + notEqual->second + ") ";
    query += "}";

    std::vector<std::string> expected;
    for (const auto& b : bruteForce(g, bgp)) {
      if (notEqual && b.at(notEqual->first) == b.at(notEqual->second)) continue;
      std::string line;
      for (const auto& v : projection) line += "?" + v + "=" + b.at(v).toNTriples() + " ";
      expected.push_back(line);
    }
    std::sort(expected.begin(), expected.end());
    if (distinct) expected.erase(std::unique(expected.begin(), expected.end()), expected.end());

    fx::rdf::Dataset d;
    d.defaultGraph = g;
    auto actual = rowMultiset(fx::query::execute(query, d));
    require(actual == expected, "trial " + std::to_string(trial) + ": " + query + "\n" +
                                    std::to_string(actual.size()) + " vs " + std::to_string(expected.size()));
    total += expected.size();
  }
  return "100 graphs, " + std::to_string(total) + " solutions";
}

// ----------------------------------------------------------------- 6

const std::vector<std::string>& selectBattery() {
  static const std::vector<std::string> queries{
      "PREFIX dct: <http://purl.org/dc/terms/> SELECT ?w ?t { ?w dct:title ?t } ORDER BY ?w",
      "PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#> SELECT ?s ?l { ?s rdfs:label ?l } ORDER BY ?l",
      "PREFIX dct: <http://purl.org/dc/terms/> SELECT ?w (STR(?s) AS ?k) { ?w dct:subject ?s } ORDER BY ?w ?k",
      "PREFIX dct: <http://purl.org/dc/terms/> SELECT DISTINCT ?s { ?w dct:subject ?s } ORDER BY ?s",
      "PREFIX dct: <http://purl.org/dc/terms/> PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>"
      " SELECT ?w ?l { ?w dct:subject ?s . ?s rdfs:label ?l } ORDER BY ?w ?l",
      "PREFIX dct: <http://purl.org/dc/terms/>"
      " SELECT ?w ?t { ?w dct:title ?t FILTER(CONTAINS(LCASE(?t), \"figure\")) } ORDER BY ?w",
      "PREFIX schema: <http://schema.org/> SELECT ?w ?u { ?w schema:thumbnailUrl ?u"
      " FILTER(STRSTARTS(?u, \"http://www.tate.org.uk/art/images/work/AR\")) }",
      "PREFIX schema: <http://schema.org/> PREFIX dct: <http://purl.org/dc/terms/>"
      " PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#> SELECT ?w ?l { ?w a schema:CreativeWork"
      " OPTIONAL { ?w dct:subject ?s . ?s rdfs:label ?l FILTER(?l = \"people\") } } ORDER BY ?w ?l",
      "SELECT ?s ?p ?o { ?s ?p ?o } ORDER BY ?s ?p ?o",
      "PREFIX dct: <http://purl.org/dc/terms/> PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>"
      " SELECT ?w ?s { ?w dct:subject ?s MINUS { ?s rdfs:label \"people\" } } ORDER BY ?w ?s LIMIT 5",
  };
  return queries;
}

struct CliOutput {
  int status;
  std::string out;
  std::string err;
};

CliOutput runCli(const fx::cli::Invocation& inv) {
  std::ostringstream out, err;
  int status = fx::cli::run(inv, out, err);
  return {status, out.str(), err.str()};
}

std::string pipelineClosure(const fx::testing::TempDir& dir) {
  fx::testing::ScopedCwd cwd(fixture("figure1"));
  fx::cli::Invocation construct;
  construct.query = fixture("figure1/arts-and-subjects.sparql").string();
  construct.format = "NT";
  construct.output = dir / "arts.nt";
  auto first = runCli(construct);
  require(first.status == fx::cli::kExitOk, "construct run: " + first.err);

  fx::rdf::Dataset inMemory;
  inMemory.defaultGraph = fx::query::execute(figureOneQuery(), fx::rdf::Dataset{}).graph;
  for (const auto& q : selectBattery()) {
    fx::cli::Invocation second;
    second.query = q;
    second.load = dir / "arts.nt";
    second.format = "JSON";
    auto r = runCli(second);
    require(r.status == fx::cli::kExitOk, q + ": " + r.err);
    auto direct = fx::cli::formatResult(fx::query::execute(q, inMemory), fx::cli::ResultFormat::Json);
    require(r.out == direct, q + "\n-l run:\n" + r.out + "in memory:\n" + direct);
  }
  return std::to_string(selectBattery().size()) + " SELECT queries";
}

// ----------------------------------------------------------------- 7

const std::vector<std::pair<std::string, std::string>>& optionCorpus() {
  static const std::vector<std::pair<std::string, std::string>> docs{
      {"name,city\n  Ada , London\nN/A,Paris\n,N/A\n", "text/csv"},
      {R"({"a":" x ","b":["N/A",{"c":"y"}, "N/A", " z"],"d":1,"e":"N/A"})", "application/json"},
      {"<r k=\" v \"><i>N/A</i><i> t </i><i>N/A</i></r>", "application/xml"},
      {"a: N/A\nb: [ ' q ', z, N/A]\n", "text/yaml"},
      {"# T\n\n- N/A\n- item\n", "text/markdown"},
      {"@misc{k, note={N/A}, title={ t }}", "application/x-bibtex"},
      {"<ul><li> N/A</li><li>b </li></ul>", "text/html"},
  };
  return docs;
}

// Drops triples with object `dropped` and closes the gaps left in each
// container's rdf:_n sequence.
fx::rdf::Graph dropAndRenumber(const fx::rdf::Graph& g, const std::string& dropped) {
  std::map<fx::rdf::Term, std::vector<std::pair<std::int64_t, fx::rdf::Term>>> slots;
  fx::rdf::Graph out;
  for (const auto& t : g) {
    if (t.object.isPlainString() && t.object.value() == dropped) continue;
    if (auto n = fx::rdf::membershipIndex(t.predicate)) {
      slots[t.subject].emplace_back(*n, t.object);
    } else {
      out.insert(t);
    }
  }
  for (auto& [s, v] : slots) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < v.size(); ++i) out.insert(s, fx::rdf::mkContainerMembership(i + 1), v[i].second);
  }
  return out;
}

fx::rdf::Graph mapTerms(const fx::rdf::Graph& g, const std::function<fx::rdf::Term(const fx::rdf::Term&)>& f) {
  fx::rdf::Graph out;
  for (const auto& t : g) out.insert(f(t.subject), f(t.predicate), f(t.object));
  return out;
}

std::string optionSemantics() {
  for (const auto& [doc, type] : optionCorpus()) {
    // null-string
    auto nulled = tri(doc, type, {{"null-string", "N/A"}});
    for (const auto& t : nulled) {
      require(!(t.object.isPlainString() && t.object.value() == "N/A"), type + ": N/A survived");
    }
    requireIso(nulled, dropAndRenumber(tri(doc, type), "N/A"), type + " null-string");

    // trim-strings
    auto trimmed = tri(doc, type, {{"trim-strings", "true"}});
    auto expectTrimmed = mapTerms(tri(doc, type), [](const fx::rdf::Term& t) {
      return t.isPlainString() ? fx::rdf::Term::literal(std::string(fx::util::trim(t.value()))) : t;
    });
    requireIso(trimmed, expectTrimmed, type + " trim-strings");

    // blank-nodes=false
    auto a = tri(doc, type, {{"blank-nodes", "false"}});
    auto b = tri(doc, type, {{"blank-nodes", "false"}});
    require(nt(a) == nt(b), type + ": blank-nodes=false output differs between runs");
    for (const auto& t : a) require(!t.subject.isBlank() && !t.object.isBlank(), type + ": blank node minted");

    // namespace
    const std::string ns = "http://example.org/my#";
    auto custom = tri(doc, type, {{"namespace", ns}});
    auto swapped = mapTerms(tri(doc, type), [&](const fx::rdf::Term& t) {
      if (t.isIri() && t.value().starts_with(fx::vocab::kXyz)) {
        return fx::rdf::Term::iri(ns + t.value().substr(fx::vocab::kXyz.size()));
      }
      return t;
    });
    requireIso(custom, swapped, type + " namespace");
  }

  // csv.delimiter=TAB, against a split-on-tab oracle.
  requireIso(tri("a\tb", "text/csv", {{"csv.delimiter", "\t"}}), ttl("[] a fx:root ; rdf:_1 [ rdf:_1 \"a\" ; rdf:_2 \"b\" ] ."),
             "tab example");
  std::mt19937 rng(9);
  const auto root = fx::rdf::Term::iri(std::string(fx::vocab::kFxRoot));
  const auto type = fx::rdf::Term::iri(std::string(fx::vocab::kRdfType));
  for (int trial = 0; trial < 20; ++trial) {
    std::string doc;
    fx::rdf::Graph oracle;
    oracle.insert(fx::rdf::Term::blank("root"), type, root);
    int rows = 1 + rng() % 5;
    for (int r = 1; r <= rows; ++r) {
      auto row = fx::rdf::Term::blank("row" + std::to_string(r));
      oracle.insert(fx::rdf::Term::blank("root"), fx::rdf::mkContainerMembership(r), row);
      int cols = 1 + rng() % 4;
      for (int c = 1; c <= cols; ++c) {
        std::string cell = std::string(kWords[rng() % 5]) + (rng() % 2 ? "," : ";");
        doc += (c > 1 ? "\t" : "") + cell;
        oracle.insert(row, fx::rdf::mkContainerMembership(c), fx::rdf::Term::literal(cell));
      }
      doc += "\n";
    }
    requireIso(tri(doc, "text/csv", {{"csv.delimiter", "\t"}}), oracle, "tab trial " + std::to_string(trial));
  }
  return std::to_string(optionCorpus().size()) + " formats, 20 TSV documents";
}

// ----------------------------------------------------------------- 8

fx::rdf::Term randomTerm(std::mt19937& rng, int position) {
  static const char* const kLexical[] = {"plain", "", "quote \" and \\ backslash", "line\nbreak\ttab\rcr",
                                         "caf\xc3\xa9 \xe2\x82\xac \xf0\x9f\x98\x80", "trailing space ", "#not a comment",
                                         "1.5e3", "<angle>"};
  static const char* const kIris[] = {"http://ex.org/a", "http://ex.org/b#frag", "urn:isbn:123",
                                      "http://ex.org/with%20escape", "http://sparql.xyz/facade-x/data/k",
                                      "http://www.w3.org/1999/02/22-rdf-syntax-ns#_3"};
  if (position == 1) return fx::rdf::Term::iri(kIris[rng() % 6]);
  int pick = rng() % (position == 0 ? 2 : 5);
  switch (pick) {
    case 0: return fx::rdf::Term::iri(kIris[rng() % 6]);
    case 1: return fx::rdf::Term::blank("n" + std::to_string(rng() % 8));
    case 2: return fx::rdf::Term::literal(kLexical[rng() % 9]);
    case 3: return fx::rdf::Term::langLiteral(kLexical[rng() % 9], rng() % 2 ? "en" : "it-IT");
    default: {
      static const char* const kTypes[] = {"http://www.w3.org/2001/XMLSchema#int",
                                           "http://www.w3.org/2001/XMLSchema#boolean", "http://ex.org/dt"};
      return fx::rdf::Term::literal(kLexical[rng() % 9], kTypes[rng() % 3]);
    }
  }
}

fx::rdf::Graph randomGraph(std::mt19937& rng) {
  fx::rdf::Graph g;
  int n = rng() % 40;
  for (int i = 0; i < n; ++i) g.insert(randomTerm(rng, 0), randomTerm(rng, 1), randomTerm(rng, 2));
  return g;
}

std::string roundTrip() {
  std::mt19937 rng(31337);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = randomGraph(rng);
    for (auto format : {fx::rdf::RdfFormat::NTriples, fx::rdf::RdfFormat::Turtle}) {
      auto text = fx::rdf::serialize(g, format);
      requireIso(fx::rdf::parseGraph(text, format), g, "trial " + std::to_string(trial) + "\n" + text);
    }
    fx::rdf::Dataset d;
    d.defaultGraph = g;
    int graphs = rng() % 3;
    // N-Quads has no way to spell an empty named graph.
    for (int i = 0; i < graphs; ++i) {
      if (auto named = randomGraph(rng); !named.empty()) d.named["http://ex.org/g" + std::to_string(i)] = named;
    }
    auto text = fx::rdf::serialize(d, fx::rdf::RdfFormat::NQuads);
    require(fx::rdf::isomorphic(fx::rdf::parseRdf(text, fx::rdf::RdfFormat::NQuads), d),
            "nquads trial " + std::to_string(trial) + "\n" + text);
  }
  return "100 graphs x NT, TTL, NQ";
}

// ----------------------------------------------------------------- 9

class RunningServer {
 public:
  explicit RunningServer(fx::endpoint::EndpointConfig config) : server_(config) {
    port_ = server_.bind();
    thread_ = std::thread([this] { server_.serve(); });
  }
  ~RunningServer() {
    server_.stop();
    thread_.join();
  }
  int port() const { return port_; }

 private:
  fx::endpoint::Server server_;
  int port_ = 0;
  std::thread thread_;
};

std::vector<std::string> acceptanceCorpus() {
  std::vector<std::string> corpus{figureOneQuery()};
  for (const auto& q : selectBattery()) corpus.push_back(q);
  auto at = [](std::string_view relative, std::string_view opts = "") {
    return "<x-sparql-anything:location=" + fixture(relative).string() + std::string(opts) + ">";
  };
  corpus.push_back(kQueryPrefixes + "SELECT * { SERVICE " + at("golden/tate.csv", ",csv.headers=true") +
                   " { ?r xyz:title ?t ; xyz:id ?id } }");
  corpus.push_back(kQueryPrefixes + "CONSTRUCT { ?s ?p ?o } WHERE { SERVICE " + at("golden/malevich.json") +
                   " { ?s ?p ?o } }");
  corpus.push_back(kQueryPrefixes + "SELECT ?place { SERVICE " + at("golden/malevich.json") +
                   " { ?a xyz:activePlaces ?c . ?c fx:anySlot ?place } } ORDER BY ?place");
  corpus.push_back(kQueryPrefixes + "ASK { SERVICE " + at("golden/lorem.txt") + " { ?r rdf:_1 \"lorem ipsum ...\" } }");
  corpus.push_back(kQueryPrefixes + "CONSTRUCT { ?s ?p ?o } WHERE { SERVICE " + at("golden/sparql-anything.md") +
                   " { ?s ?p ?o } }");
  corpus.push_back(kQueryPrefixes + "SELECT ?t { SERVICE " + at("formats/books.xml") +
                   " { ?b a xyz:book ; fx:anySlot ?t FILTER(isLiteral(?t)) } }");
  corpus.push_back(kQueryPrefixes + "SELECT ?name { SERVICE " + at("formats/page.html", ",html.selector=li.artist") +
                   " { ?li fx:anySlot ?x . ?x fx:anySlot ?name FILTER(isLiteral(?name)) } }");
  corpus.push_back(kQueryPrefixes + "SELECT ?k ?v { SERVICE " + at("formats/component.yaml") +
                   " { ?root a fx:root ; ?k ?v FILTER(isLiteral(?v)) } }");
  corpus.push_back(kQueryPrefixes + "SELECT ?f { SERVICE " + at("formats/sample.zip") + " { ?c fx:anySlot ?f"
                   " FILTER(isLiteral(?f)) } } ORDER BY ?f");
  corpus.push_back(kQueryPrefixes + "SELECT ?title { SERVICE " + at("formats/refs.bib") +
                   " { ?e xyz:title ?title } VALUES ?unused { 1 } }");
  corpus.push_back("ASK {}");
  return corpus;
}

// SELECT/ASK JSON documents compared as (variables, sorted bindings, boolean).
bool sameResultsJson(const std::string& a, const std::string& b) {
  auto normal = [](const std::string& text) {
    auto j = nlohmann::json::parse(text);
    if (j.contains("boolean")) return j;
    std::vector<std::string> rows;
    for (const auto& row : j["results"]["bindings"]) rows.push_back(row.dump());
    std::sort(rows.begin(), rows.end());
    return nlohmann::json{{"vars", j["head"]["vars"]}, {"rows", rows}};
  };
  return normal(a) == normal(b);
}

std::string endpointAgreement(const fx::testing::TempDir& dir) {
  fx::testing::ScopedCwd cwd(fixture("figure1"));
  fx::endpoint::EndpointConfig config;
  config.port = 0;
  config.load = dir / "arts.nt";
  RunningServer server(config);
  httplib::Client client("127.0.0.1", server.port());
  client.set_read_timeout(30, 0);

  std::size_t n = 0;
  for (const auto& q : acceptanceCorpus()) {
    bool graphForm = q.find("CONSTRUCT") != std::string::npos;
    std::string accept = graphForm ? "text/turtle" : "application/sparql-results+json";
    auto res = client.Post("/sparql", {{"Accept", accept}}, q, "application/sparql-query");
    require(res && res->status == 200, q + "\nHTTP " + (res ? std::to_string(res->status) + " " + res->body : "no reply"));

    fx::cli::Invocation inv;
    inv.query = q;
    inv.load = dir / "arts.nt";
    inv.format = graphForm ? "TTL" : "JSON";
    auto cli = runCli(inv);
    require(cli.status == fx::cli::kExitOk, q + "\nCLI: " + cli.err);

    if (graphForm) {
      auto viaHttp = fx::rdf::parseGraph(res->body, fx::rdf::RdfFormat::Turtle);
      auto viaCli = fx::rdf::parseGraph(cli.out, fx::rdf::RdfFormat::Turtle);
      require(!viaCli.empty() && fx::rdf::isomorphic(viaHttp, viaCli), q + "\ngraphs differ");
    } else {
      require(sameResultsJson(res->body, cli.out), q + "\nHTTP:\n" + res->body + "CLI:\n" + cli.out);
    }
    ++n;
  }
  return std::to_string(n) + " queries";
}

// ----------------------------------------------------------------- 10

std::string formatBreadth() {
  requireIso(triFile("formats/books.xml"),
             ttl("@prefix dc: <http://purl.org/dc/elements/1.1/> .\n"
                 "[] a fx:root , xyz:library ;\n"
                 "  rdf:_1 [ a xyz:book ; xyz:id \"b1\" ; rdf:_1 [ a dc:title ; rdf:_1 \"Dubliners\" ] ] ;\n"
                 "  rdf:_2 [ a xyz:book ; xyz:id \"b2\" ; xyz:lang \"it\" ; rdf:_1 \"Il nome \" ;\n"
                 "           rdf:_2 [ a xyz:em ; rdf:_1 \"della\" ] ; rdf:_3 \" rosa\" ] ."),
             "xml");
  requireIso(triFile("formats/page.html", {{"html.selector", "li.artist"}}),
             ttl("[] a fx:root ;"
                 " rdf:_1 [ a xyz:li ; xyz:class \"artist\" ; rdf:_1 [ a xyz:a ; xyz:href \"/a/1\" ;"
                 " rdf:_1 \"Kazimir Malevich\" ] ] ;"
                 " rdf:_2 [ a xyz:li ; xyz:class \"artist\" ; rdf:_1 \"Hilma af Klint\" ] ."),
             "html");
  requireIso(triFile("formats/component.yaml"),
             ttl("[] a fx:root ; xyz:name \"music-algorithms\" ; xyz:version \"2\"^^xsd:int ;"
                 " xyz:stable \"true\"^^xsd:boolean ; xyz:ratio \"0.5\"^^xsd:float ;"
                 " xyz:tags [ rdf:_1 \"midi\" ; rdf:_2 \"2\" ] ; xyz:owner [ a xyz:Person ; xyz:login \"ecodev\" ] ."),
             "yaml");
  requireIso(triFile("formats/refs.bib"),
             ttl("[] a fx:root ;"
                 " rdf:_1 [ a xyz:article ; xyz:citationKey \"turing1950\" ; xyz:title \"Computing Machinery and Intelligence\" ;"
                 "   xyz:year \"1950\" ; xyz:journal \"Mind\" ] ;"
                 " rdf:_2 [ a xyz:inproceedings ; xyz:citationKey \"hopper1952\" ;"
                 "   xyz:author \"Hopper, Grace and {Mauchly}, John\" ] ."),
             "bibtex");
  requireIso(triFile("formats/man.bin"), ttl("[] a fx:root ; rdf:_1 \"TWFu\"^^xsd:base64Binary ."), "binary");
  requireIso(triFile("formats/tree"),
             ttl("[] a fx:root ; rdf:_1 \"a.txt\" ; rdf:_2 [ rdf:_1 \"b.txt\" ; rdf:_2 \"c.csv\" ] ."), "directory");
  requireIso(triFile("formats/sample.zip"),
             ttl("[] a fx:root ; rdf:_1 \"data.csv\" ; rdf:_2 [ rdf:_1 [ rdf:_1 \"logo.png\" ] ; rdf:_2 \"readme.md\" ] ."),
             "zip");
  requireIso(triFile("formats/sample.tar"),
             ttl("[] a fx:root ; rdf:_1 \"data.csv\" ; rdf:_2 [ rdf:_1 \"" + std::string(120, 'x') +
                 ".txt\" ] ; rdf:_3 [ rdf:_1 [ rdf:_1 \"logo.png\" ] ; rdf:_2 \"readme.md\" ] ."),
             "tar");
  return "8 fixtures";
}

}  // namespace

int main() {
  fx::testing::TempDir dir;
  const std::vector<std::pair<std::string, std::function<std::string()>>> criteria{
      {"worked example graphs", [] { goldenGraphs(); return std::string("4 examples"); }},
      {"figure 1 pipeline", figureOnePipeline},
      {"filter transparency", filterTransparency},
      {"slice transparency", sliceTransparency},
      {"naive evaluator oracle", naiveOracle},
      {"pipeline closure", [&] { return pipelineClosure(dir); }},
      {"option semantics", optionSemantics},
      {"serialization round trip", roundTrip},
      {"endpoint/CLI agreement", [&] { return endpointAgreement(dir); }},
      {"format breadth", formatBreadth},
  };
  int failed = 0;
  auto suiteStart = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& [name, check] = criteria[i];
    std::string status = "PASS", detail;
    try {
      detail = check();
    } catch (const Failure& f) {
      status = "FAIL";
      detail = f.detail;
    } catch (const std::exception& e) {
      status = "FAIL";
      detail = std::string("error: ") + e.what();
    }
    if (status == "FAIL") ++failed;
    std::cout << "criterion " << i + 1 << ": " << status << "  " << name << " (" << detail << ")" << std::endl;
  }
  auto total = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - suiteStart);
  std::cout << failed << " of " << criteria.size() << " criteria failed, " << total.count() << " ms" << std::endl;
  return failed == 0 ? 0 : 1;
}
