#include <gtest/gtest.h>
#include <httplib.h>

#include <json.hpp>
#include <sstream>
#include <thread>

#include "facadex/cli/run.hpp"
#include "facadex/endpoint/server.hpp"
#include "facadex/error.hpp"
#include "facadex/rdf/io.hpp"
#include "testing.hpp"

namespace facadex::endpoint {
namespace {

using facadex::testing::fixture;

class RunningServer {
 public:
  explicit RunningServer(EndpointConfig config = {}) : server_([&] {
    config.port = 0;
    return config;
  }()) {
    port_ = server_.bind();
    thread_ = std::thread([this] { server_.serve(); });
  }
  ~RunningServer() {
    server_.stop();
    thread_.join();
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(10, 0);
    return c;
  }

 private:
  Server server_;
  int port_ = 0;
  std::thread thread_;
};

std::string figureOneQuery() { return testing::slurp(fixture("figure1/arts-and-subjects.sparql")); }

TEST(Endpoint, AskEmptyIsTrue) {
  RunningServer server;
  auto res = server.client().Get("/sparql?query=" + httplib::detail::encode_url("ASK {}"));
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Content-Type"), "application/sparql-results+json");
  EXPECT_EQ(nlohmann::json::parse(res->body)["boolean"], true);
}

TEST(Endpoint, MalformedQueryIs400) {
  RunningServer server;
  auto res = server.client().Get("/sparql?query=SELECT");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_NE(res->body.find("parse error"), std::string::npos) << res->body;
  auto missing = server.client().Get("/sparql");
  EXPECT_EQ(missing->status, 400);
}

TEST(Endpoint, FigureOneAgreesWithCli) {
  testing::ScopedCwd cwd(fixture("figure1"));
  RunningServer server;
  auto res = server.client().Post("/sparql", {{"Accept", "text/turtle"}}, figureOneQuery(), "application/sparql-query");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  EXPECT_TRUE(res->get_header_value("Content-Type").starts_with("text/turtle"));

  cli::Invocation inv;
  inv.query = fixture("figure1/arts-and-subjects.sparql").string();
  inv.format = "TTL";
  std::ostringstream out, err;
  ASSERT_EQ(cli::run(inv, out, err), cli::kExitOk) << err.str();

  auto viaHttp = rdf::parseGraph(res->body, rdf::RdfFormat::Turtle);
  auto viaCli = rdf::parseGraph(out.str(), rdf::RdfFormat::Turtle);
  EXPECT_EQ(viaHttp.size(), 18u);
  EXPECT_TRUE(rdf::isomorphic(viaHttp, viaCli));

  auto ntriples = server.client().Post("/sparql", {{"Accept", "application/n-triples"}}, figureOneQuery(),
                                       "application/sparql-query");
  EXPECT_TRUE(rdf::isomorphic(rdf::parseGraph(ntriples->body, rdf::RdfFormat::NTriples), viaCli));
}

TEST(Endpoint, AcceptNegotiation) {
  RunningServer server;
  const std::string q = "SELECT ?v { VALUES ?v { \"a\" \"b\" } }";
  auto csv = server.client().Post("/sparql", {{"Accept", "text/csv"}}, q, "application/sparql-query");
  EXPECT_EQ(csv->body, "v\r\na\r\nb\r\n");
  EXPECT_TRUE(csv->get_header_value("Content-Type").starts_with("text/csv"));
  auto weighted = server.client().Post("/sparql", {{"Accept", "text/csv;q=0.5, application/sparql-results+xml"}}, q,
                                       "application/sparql-query");
  EXPECT_EQ(weighted->get_header_value("Content-Type"), "application/sparql-results+xml");
  auto fallback = server.client().Post("/sparql", {{"Accept", "image/png"}}, q, "application/sparql-query");
  EXPECT_EQ(fallback->get_header_value("Content-Type"), "application/sparql-results+json");
}

TEST(Endpoint, FormPostAndUnsupportedTypes) {
  RunningServer server;
  auto form = server.client().Post("/sparql", httplib::Params{{"query", "ASK {}"}});
  ASSERT_TRUE(form);
  EXPECT_EQ(form->status, 200);
  auto other = server.client().Post("/sparql", "ASK {}", "text/plain");
  EXPECT_EQ(other->status, 415);
  auto emptyForm = server.client().Post("/sparql", "x=1", "application/x-www-form-urlencoded");
  EXPECT_EQ(emptyForm->status, 400);
}

TEST(Endpoint, ExecutionErrorsAre500) {
  RunningServer server;
  auto res = server.client().Post(
      "/sparql", "SELECT * { SERVICE <x-sparql-anything:location=/no/such/file.csv> { ?s ?p ?o } }",
      "application/sparql-query");
  EXPECT_EQ(res->status, 500);
  EXPECT_NE(res->body.find("/no/such/file.csv"), std::string::npos);
}

TEST(Endpoint, BodyLimit) {
  EndpointConfig config;
  config.maxBodyBytes = 64;
  RunningServer server(config);
  auto res = server.client().Post("/sparql", "ASK {} #" + std::string(200, 'x'), "application/sparql-query");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 413);
}

TEST(Endpoint, LocalFilesCanBeDisabled) {
  EndpointConfig config;
  config.allowLocalFiles = false;
  QueryService service(config);
  auto file = service.answer("SELECT * { SERVICE <x-sparql-anything:location=" + fixture("golden/lorem.txt").string() +
                                 "> { ?s ?p ?o } }",
                             "");
  EXPECT_EQ(file.status, 500);
  auto command = service.answer(
      "SELECT * { SERVICE <x-sparql-anything:> {"
      " <http://sparql.xyz/facade-x/ns/properties> <http://sparql.xyz/facade-x/ns/command> \"echo hi\" ."
      " ?s ?p ?o } }",
      "");
  EXPECT_EQ(command.status, 500);
  auto content = service.answer("SELECT * { SERVICE <x-sparql-anything:content=hi> { ?s ?p ?o } }", "");
  EXPECT_EQ(content.status, 200);
}

TEST(Endpoint, TimeoutIs504) {
  testing::TempDir dir;
  std::string nt;
  for (int i = 0; i < 300; ++i) nt += "<http://ex.org/s" + std::to_string(i) + "> <http://ex.org/p> \"" + std::to_string(i) + "\" .\n";
  dir.write("big.nt", nt);
  EndpointConfig config;
  config.load = dir / "big.nt";
  config.timeout = std::chrono::milliseconds(20);
  QueryService service(config);
  auto res = service.answer("SELECT * { ?a ?p ?x . ?b ?p ?y . ?c ?p ?z }", "");
  EXPECT_EQ(res.status, 504) << res.body;
}

TEST(Endpoint, LoadedDatasetAndConcurrentRequests) {
  EndpointConfig config;
  config.load = fixture("golden/malevich.ttl");
  RunningServer server(config);
  const std::string q = "SELECT ?place { ?s <http://sparql.xyz/facade-x/data/activePlaces> ?c . ?c ?slot ?place }"
                        " ORDER BY ?place";
  std::vector<std::string> bodies(8);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    threads.emplace_back([&, i] {
      auto res = server.client().Post("/sparql", {{"Accept", "text/csv"}}, q, "application/sparql-query");
      if (res) bodies[i] = res->body;
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& b : bodies) EXPECT_EQ(b, "place\r\nMoskov\r\nUkrayina\r\n");
}

TEST(Config, Validation) {
  EndpointConfig bad;
  bad.port = 70000;
  EXPECT_THROW(validateConfig(bad), Error);
  EndpointConfig zero;
  zero.timeout = std::chrono::milliseconds(0);
  try {
    validateConfig(zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Usage);
  }
  EXPECT_NO_THROW(validateConfig(EndpointConfig{}));
}

}  // namespace
}  // namespace facadex::endpoint
