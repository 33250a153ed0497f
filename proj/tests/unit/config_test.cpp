#include <gtest/gtest.h>

#include "facadex/config/options.hpp"
#include "facadex/error.hpp"
#include "facadex/query/parser.hpp"
#include "testing.hpp"

namespace facadex::config {
namespace {

using query::TriplePattern;
using query::Var;

ErrorKind kindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::Usage;
}

const rdf::Term kProps = rdf::Term::iri(std::string(vocab::kFxProperties));
rdf::Term fx(std::string_view local) { return rdf::Term::iri(std::string(vocab::kFx) + std::string(local)); }

TEST(ServiceIri, OptionValuesKeepSemicolonsAndColons) {
  auto parsed = parseServiceIri("x-sparql-anything:media-type=application/json; charset=UTF-8,location=http://h/f");
  EXPECT_EQ(parsed.options.get(opt::kMediaType), "application/json; charset=UTF-8");
  ASSERT_TRUE(parsed.source);
  EXPECT_EQ(*parsed.source, SourceSpec::location("http://h/f"));
  EXPECT_FALSE(parsed.options.contains(opt::kLocation));
}

TEST(ServiceIri, FigureOneForm) {
  auto parsed = parseServiceIri("x-sparql-anything:csv.headers=true,location=./collection/artwork_data.csv");
  EXPECT_EQ(parsed.options.get(opt::kCsvHeaders), "true");
  EXPECT_EQ(*parsed.source, SourceSpec::location("./collection/artwork_data.csv"));
}

TEST(ServiceIri, BareLocation) {
  auto parsed = parseServiceIri("x-sparql-anything:./data.json");
  EXPECT_TRUE(parsed.options.empty());
  EXPECT_EQ(*parsed.source, SourceSpec::location("./data.json"));
}

TEST(ServiceIri, EscapedSeparatorsInValues) {
  auto parsed = parseServiceIri("x-sparql-anything:content=a%2Cb%3Dc,media-type=text/csv");
  EXPECT_EQ(*parsed.source, SourceSpec::content("a,b=c"));
}

TEST(ServiceIri, EmptyRemainderHasNoSource) {
  auto parsed = parseServiceIri("x-sparql-anything:");
  EXPECT_FALSE(parsed.source);
  EXPECT_TRUE(parsed.options.empty());
}

TEST(ServiceIri, TwoSourcesConflict) {
  EXPECT_EQ(kindOf([] { parseServiceIri("x-sparql-anything:location=a.csv,content=x"); }),
            ErrorKind::ConflictingSource);
  EXPECT_EQ(kindOf([] { parseServiceIri("x-sparql-anything:a.csv,location=b.csv"); }), ErrorKind::ConflictingSource);
}

TEST(ServiceIri, OtherSchemesAreRejected) {
  EXPECT_EQ(kindOf([] { parseServiceIri("http://dbpedia.org/sparql"); }), ErrorKind::UnsupportedEndpoint);
}

TEST(ServiceIri, EncodeParsesBackToSameOptions) {
  FacadeOptions options{{"csv.headers", "true"}, {"txt.split", ","}, {"null-string", "a=b"}};
  auto spec = SourceSpec::content("x,y");
  auto parsed = parseServiceIri(encodeServiceIri(options, spec));
  EXPECT_EQ(parsed.options, options);
  EXPECT_EQ(parsed.source, spec);
}

TEST(Options, NamesAreNormalised) {
  FacadeOptions o;
  o.set("CSV.Headers", "true");
  o.set("http.query.param.api-key", "k");
  o.set("http.header.Accept", "text/csv");
  EXPECT_EQ(o.get("csv.headers"), "true");
  EXPECT_EQ(o.get("http.query.api-key"), "k");
  EXPECT_EQ(o.withPrefix("http.header.").at(0).first, "Accept");
}

TEST(Options, BooleansAreStrict) {
  FacadeOptions o{{"csv.headers", "yes"}};
  EXPECT_EQ(kindOf([&] { o.getBool(opt::kCsvHeaders, false); }), ErrorKind::Config);
  EXPECT_EQ(kindOf([&] { validateOptions(o); }), ErrorKind::Config);
  EXPECT_TRUE(FacadeOptions{}.getBool(opt::kCsvHeaders, true));
}

TEST(Options, ValidationDomains) {
  EXPECT_EQ(kindOf([] { validateOptions({{"strategy", "2"}}); }), ErrorKind::Config);
  EXPECT_EQ(kindOf([] { validateOptions({{"slice", "1"}}); }), ErrorKind::Config);
  EXPECT_EQ(kindOf([] { validateOptions({{"ondisk", "/tmp/x"}}); }), ErrorKind::Unsupported);
  EXPECT_EQ(kindOf([] { validateOptions({{"metadata", "true"}}); }), ErrorKind::Unsupported);
  EXPECT_TRUE(validateOptions({{"metadata", "false"}, {"strategy", "0"}}).empty());
  auto warnings = validateOptions({{"html.browser", "chrome"}});
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("html.browser"), std::string::npos);
}

TEST(Inline, FixedValues) {
  std::vector<TriplePattern> bgp{{kProps, fx("location"), rdf::Term::literal("./my-file.csv")}};
  auto cfg = extractInlineProperties(bgp);
  EXPECT_EQ(cfg.fixed.get(opt::kLocation), "./my-file.csv");
  EXPECT_TRUE(cfg.residual.empty());
  EXPECT_TRUE(cfg.variableBound.empty());
}

TEST(Inline, VariableBoundValues) {
  auto data = rdf::Term::iri("http://ex.org/x");
  std::vector<TriplePattern> bgp{{kProps, fx("content"), Var{"data"}},
                                 {kProps, fx("media-type"), rdf::Term::literal("text/csv")},
                                 {Var{"s"}, data, Var{"o"}}};
  auto cfg = extractInlineProperties(bgp);
  EXPECT_EQ(cfg.fixed.get(opt::kMediaType), "text/csv");
  EXPECT_FALSE(cfg.fixed.contains(opt::kContent));
  EXPECT_EQ(cfg.variableBound.at("content"), "data");
  ASSERT_EQ(cfg.residual.size(), 1u);
  EXPECT_EQ(cfg.residual[0], bgp[2]);
}

TEST(Inline, NoPropertiesIsIdentity) {
  std::vector<TriplePattern> bgp{{Var{"s"}, Var{"p"}, Var{"o"}}};
  auto cfg = extractInlineProperties(bgp);
  EXPECT_TRUE(cfg.fixed.empty());
  EXPECT_EQ(cfg.residual, bgp);
}

TEST(Inline, ForeignPredicateIsInvalid) {
  std::vector<TriplePattern> bgp{{kProps, rdf::Term::iri("http://ex.org/location"), rdf::Term::literal("a")}};
  EXPECT_EQ(kindOf([&] { extractInlineProperties(bgp); }), ErrorKind::Config);
}

TEST(Inline, HttpQueryParamSpelling) {
  std::vector<TriplePattern> bgp{{kProps, fx("http.query.param.api-key"), rdf::Term::literal("my-api-key")}};
  EXPECT_EQ(extractInlineProperties(bgp).fixed.get("http.query.api-key"), "my-api-key");
}

TEST(Merge, InlineWins) {
  FacadeOptions iri{{"media-type", "text/csv"}, {"csv.headers", "true"}};
  auto merged = mergeOptions(iri, {{"media-type", "application/json"}});
  EXPECT_EQ(merged.get(opt::kMediaType), "application/json");
  EXPECT_EQ(merged.get(opt::kCsvHeaders), "true");
  EXPECT_EQ(mergeOptions(iri, {}), iri);
}

TEST(Merge, DifferentSourceKindsConflict) {
  EXPECT_EQ(kindOf([] { mergeOptions({{"location", "a.csv"}}, {{"command", "echo x"}}); }),
            ErrorKind::ConflictingSource);
  auto same = mergeOptions({{"location", "a.csv"}}, {{"location", "b.csv"}});
  EXPECT_EQ(same.source(), SourceSpec::location("b.csv"));
}

TEST(MediaType, ExplicitOptionWins) {
  EXPECT_EQ(guessMediaType(SourceSpec::location("a/b.xml"), {{"media-type", "text/csv"}}), "text/csv");
  EXPECT_EQ(guessMediaType(SourceSpec::location("a"), {{"media-type", "Application/JSON; charset=UTF-8"}}),
            "application/json");
}

TEST(MediaType, ExtensionRegistry) {
  const std::pair<const char*, const char*> cases[] = {
      {"a/b.json", "application/json"}, {"x.CSV", "text/csv"},         {"x.tsv", "text/csv"},
      {"x.xml", "application/xml"},     {"x.htm", "text/html"},        {"x.yml", "text/yaml"},
      {"x.md", "text/markdown"},        {"x.bib", "application/x-bibtex"}, {"x.txt", "text/plain"},
      {"x.zip", "application/zip"},     {"x.tar", "application/x-tar"}, {"a/b.unknownext", "application/octet-stream"},
      {"noext", "application/octet-stream"}, {"some/dir/", "inode/directory"},
      {"http://h/data.json?x=1#f", "application/json"},
  };
  for (const auto& [location, expected] : cases) {
    EXPECT_EQ(guessMediaType(SourceSpec::location(location), {}), expected) << location;
  }
  EXPECT_EQ(guessMediaType(SourceSpec::location(testing::fixture("formats/tree").string()), {}), "inode/directory");
  EXPECT_EQ(guessMediaType(SourceSpec::content("a,b"), {}), "application/octet-stream");
}

TEST(MediaType, CharsetParameter) {
  EXPECT_EQ(charsetParameter("text/csv; charset=\"ISO-8859-1\""), "ISO-8859-1");
  EXPECT_FALSE(charsetParameter("text/csv"));
}

}  // namespace
}  // namespace facadex::config
