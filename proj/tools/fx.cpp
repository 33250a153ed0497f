#include <CLI11.hpp>

#include <iostream>

#include "facadex/cli/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Run SPARQL queries over heterogeneous files through the Facade-X model", "fx"};
  facadex::cli::Invocation inv;
  std::optional<std::string> output, values, load;
  std::optional<long> timeoutMs;

  app.add_option("-q,--query", inv.query, "query file, or the query text")->required();
  app.add_option("-f,--format", inv.format, "JSON, XML, CSV, TEXT, TTL, NT or NQ");
  app.add_option("-o,--output", output, "write the result to this file");
  app.add_option("-i,--input", values, "parameter values (SPARQL results JSON or CSV)");
  app.add_option("-v,--values", inv.inlineValues, "parameter value name=value (repeatable)");
  app.add_option("-p,--output-pattern", inv.outputPattern, "output file name with ?_name placeholders");
  app.add_option("-l,--load", load, "RDF file or directory to query as the default graph");
  app.add_option("--timeout", timeoutMs, "per-query time limit in milliseconds")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return facadex::cli::kExitUsage;
  }
  if (output) inv.output = *output;
  if (values) inv.valuesFile = *values;
  if (load) inv.load = *load;
  if (timeoutMs) inv.timeout = std::chrono::milliseconds(*timeoutMs);
  return facadex::cli::run(inv, std::cout, std::cerr);
}
