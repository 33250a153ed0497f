#include <gtest/gtest.h>

#include <set>

#include "facadex/error.hpp"
#include "facadex/query/engine.hpp"
#include "facadex/query/functions.hpp"
#include "testing.hpp"

namespace facadex::query {
namespace {

using facadex::testing::ttl;

const rdf::Term kTate = rdf::Term::iri("http://sparql.xyz/example/tate/");

rdf::Term slot(std::int64_t n) { return rdf::mkContainerMembership(n); }

ErrorKind kindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::Usage;
}

TEST(Entity, ConcatenatesStringForms) {
  EXPECT_EQ(fxEntity({kTate, rdf::Term::literal("artwork-"), rdf::Term::literal("12")}),
            rdf::Term::iri("http://sparql.xyz/example/tate/artwork-12"));
  EXPECT_EQ(fxEntity({kTate}), kTate);
  EXPECT_EQ(fxEntity({rdf::Term::iri("http://ex.org/"), rdf::Term::literal("7", std::string(vocab::kXsdInt))}).value(),
            "http://ex.org/7");
}

TEST(Entity, BadArguments) {
  EXPECT_EQ(kindOf([] { fxEntity({}); }), ErrorKind::Evaluation);
  EXPECT_EQ(kindOf([] { fxEntity({rdf::Term::blank("b")}); }), ErrorKind::Evaluation);
  // Not an absolute IRI once concatenated.
  EXPECT_EQ(kindOf([] { fxEntity({rdf::Term::literal("no scheme")}); }), ErrorKind::Evaluation);
}

TEST(Entity, AgreesWithIriConcat) {
  const std::vector<std::vector<std::string>> parts{
      {"\"http://a/\"", "\"b\""}, {"<http://sparql.xyz/example/tate/>", "\"artwork-\"", "12"},
      {"<urn:x:>", "\"y\"", "\"5\"^^xsd:int"}, {"\"x-sparql-anything:location=\"", "\"./a b.json\""}};
  for (const auto& p : parts) {
    std::string args, strs;
    for (const auto& a : p) {
      args += (args.empty() ? "" : ", ") + a;
      strs += (strs.empty() ? "" : ", ") + ("STR(" + a + ")");
    }
    auto r = execute("PREFIX fx: <http://sparql.xyz/facade-x/ns/> PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>"
                     " SELECT ?a ?b { BIND(fx:entity(" + args + ") AS ?a) BIND(IRI(CONCAT(" + strs + ")) AS ?b) }",
                     rdf::Dataset{});
    ASSERT_EQ(r.solutions.rows.size(), 1u);
    const auto& row = r.solutions.rows[0];
    ASSERT_TRUE(row.contains("a") && row.contains("b")) << args;
    EXPECT_EQ(row.at("a"), row.at("b")) << args;
  }
}

TEST(Literal, DatatypeAndLanguage) {
  EXPECT_EQ(fxLiteral(rdf::Term::literal("5"), rdf::Term::iri(std::string(vocab::kXsdInt))),
            rdf::Term::literal("5", std::string(vocab::kXsdInt)));
  EXPECT_EQ(fxLiteral(rdf::Term::literal("x"), rdf::Term::literal("en")), rdf::Term::langLiteral("x", "en"));
  EXPECT_EQ(fxLiteral(rdf::Term::literal("y"), rdf::Term::iri(std::string(vocab::kXsdString))),
            rdf::Term::literal("y"));
  EXPECT_EQ(kindOf([] { fxLiteral(rdf::Term::literal("y"), rdf::Term::blank("b")); }), ErrorKind::Evaluation);
  EXPECT_EQ(kindOf([] { fxLiteral(rdf::Term::literal("y"), rdf::Term::integer(1)); }), ErrorKind::Evaluation);
}

TEST(Navigation, SpecExamples) {
  EXPECT_EQ(rdf::membershipIndex(fxNext(slot(1))), 2);
  EXPECT_EQ(fxPrev(slot(3)), slot(2));
  EXPECT_FALSE(fxBefore(slot(2), slot(2)));
  EXPECT_TRUE(fxAfter(slot(5), slot(3)));
  EXPECT_TRUE(fxBefore(slot(9), slot(10)));
}

TEST(Navigation, Errors) {
  EXPECT_EQ(kindOf([] { fxPrev(slot(1)); }), ErrorKind::Evaluation);
  EXPECT_EQ(kindOf([] { fxNext(rdf::Term::iri("http://sparql.xyz/facade-x/data/id")); }), ErrorKind::Evaluation);
  EXPECT_EQ(kindOf([] { fxBefore(slot(1), rdf::Term::literal("x")); }), ErrorKind::Evaluation);
}

TEST(Navigation, TrichotomyAndInverse) {
  for (std::int64_t i = 1; i <= 40; ++i) {
    EXPECT_EQ(fxPrev(fxNext(slot(i))), slot(i));
    for (std::int64_t j = 1; j <= 40; ++j) {
      int holds = int(fxBefore(slot(i), slot(j))) + int(fxAfter(slot(i), slot(j))) + int(i == j);
      EXPECT_EQ(holds, 1) << i << " " << j;
    }
  }
}

TEST(Navigation, InQueries) {
  auto g = ttl("[] rdf:_1 \"a\" ; rdf:_2 \"b\" ; rdf:_3 \"c\" .");
  rdf::Dataset d;
  d.defaultGraph = g;
  auto r = execute(
      "PREFIX fx: <http://sparql.xyz/facade-x/ns/> SELECT ?x ?y { ?c ?p ?x . ?c ?q ?y FILTER(fx:next(?p) = ?q) }"
      " ORDER BY ?x",
      d);
  ASSERT_EQ(r.solutions.rows.size(), 2u);
  EXPECT_EQ(r.solutions.rows[0].at("x").value(), "a");
  EXPECT_EQ(r.solutions.rows[0].at("y").value(), "b");
}

using Pair = std::pair<rdf::Term, rdf::Term>;

std::vector<Pair> anySlot(const rdf::Graph& g, std::optional<rdf::Term> s, std::optional<rdf::Term> o) {
  std::vector<Pair> out;
  anySlotMatch(g, s, o, [&](const rdf::Term& a, const rdf::Term& b) { out.emplace_back(a, b); });
  return out;
}

TEST(AnySlot, SpecExamples) {
  auto g = rdf::parseGraph(testing::slurp(testing::fixture("golden/malevich.ttl")), rdf::RdfFormat::Turtle);
  rdf::Term places;
  for (const auto& t : g) {
    if (t.predicate.value() == std::string(vocab::kXyz) + "activePlaces") places = t.object;
  }
  auto found = anySlot(g, places, std::nullopt);
  std::set<std::string> values;
  for (const auto& [s, o] : found) values.insert(o.value());
  EXPECT_EQ(values, (std::set<std::string>{"Ukrayina", "Moskov"}));

  EXPECT_TRUE(anySlot(ttl("ex:a ex:p ex:b ."), std::nullopt, std::nullopt).empty());
  EXPECT_EQ(anySlot(g, places, rdf::Term::literal("Moskov")).size(), 1u);
  EXPECT_TRUE(anySlot(g, places, rdf::Term::literal("Paris")).empty());
}

TEST(AnySlot, UnionOverEveryIndex) {
  auto g = ttl(
      "ex:c rdf:_1 ex:x ; rdf:_2 \"v\" ; rdf:_10 ex:x ; ex:p ex:x . ex:d rdf:_3 ex:x ; rdf:_1 \"v\" . ex:e rdf:type ex:x .");
  // Oracle: plain BGP matches of <s, rdf:_n, o> for every n occurring in g.
  std::set<std::int64_t> indices;
  for (const auto& t : g) {
    if (auto n = rdf::membershipIndex(t.predicate)) indices.insert(*n);
  }
  const std::optional<rdf::Term> terms[] = {std::nullopt, rdf::Term::iri("http://ex.org/c"),
                                            rdf::Term::iri("http://ex.org/x"), rdf::Term::literal("v")};
  for (const auto& s : terms) {
    for (const auto& o : terms) {
      std::multiset<std::string> expected, actual;
      for (auto n : indices) {
        auto p = slot(n);
        g.match(s ? &*s : nullptr, &p, o ? &*o : nullptr,
                [&](const rdf::Triple& t) { expected.insert(t.subject.toNTriples() + t.object.toNTriples()); });
      }
      for (const auto& [a, b] : anySlot(g, s, o)) actual.insert(a.toNTriples() + b.toNTriples());
      EXPECT_EQ(actual, expected);
    }
  }
}

TEST(Registry, UniqueIrisAndLookup) {
  FunctionRegistry r;
  r.addFunction("http://ex.org/f", [](const std::vector<rdf::Term>& a) { return a.at(0); });
  EXPECT_EQ(kindOf([&] { r.addFunction("http://ex.org/f", [](const auto& a) { return a.at(0); }); }),
            ErrorKind::Config);
  EXPECT_TRUE(r.function("http://ex.org/f"));
  EXPECT_FALSE(r.function("http://ex.org/g"));
  const auto& standard = FunctionRegistry::standard();
  for (const char* name : {"entity", "literal", "next", "prev", "before", "after"}) {
    EXPECT_TRUE(standard.function(std::string(vocab::kFx) + name)) << name;
  }
  EXPECT_TRUE(standard.magicProperty(std::string(vocab::kFxAnySlot)));
}

TEST(Registry, CustomFunctionInQuery) {
  FunctionRegistry r;
  r.addFunction("http://ex.org/twice", [](const std::vector<rdf::Term>& a) {
    return rdf::Term::literal(a.at(0).value() + a.at(0).value());
  });
  EngineOptions o;
  o.registry = &r;
  auto res = execute("SELECT ?v { BIND(<http://ex.org/twice>(\"ab\") AS ?v) }", rdf::Dataset{}, o);
  EXPECT_EQ(res.solutions.rows.at(0).at("v").value(), "abab");
}

}  // namespace
}  // namespace facadex::query
