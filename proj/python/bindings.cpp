#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "facadex/cli/results.hpp"
#include "facadex/error.hpp"
#include "facadex/query/engine.hpp"
#include "facadex/rdf/io.hpp"
#include "facadex/rdf/isomorphism.hpp"
#include "facadex/resolve/source.hpp"
#include "facadex/triplify/triplifiers.hpp"

namespace py = pybind11;
using namespace facadex;

namespace {

config::FacadeOptions toOptions(const std::map<std::string, std::string>& entries) {
  config::FacadeOptions o;
  for (const auto& [k, v] : entries) o.set(k, v);
  return o;
}

rdf::RdfFormat rdfFormat(const std::string& name) {
  auto f = rdf::rdfFormatFromName(name);
  if (!f) throw Error(ErrorKind::Usage, "unknown RDF format: " + name);
  return *f;
}

rdf::Dataset loadBase(const std::optional<std::filesystem::path>& load) {
  return load ? rdf::loadRdf(*load) : rdf::Dataset{};
}

query::QueryResult run(const std::string& text, const std::optional<std::filesystem::path>& load,
                       std::optional<long> timeoutMs) {
  auto base = loadBase(load);
  query::EngineOptions o;
  if (timeoutMs) o.timeout = std::chrono::milliseconds(*timeoutMs);
  py::gil_scoped_release release;
  return query::execute(text, base, o);
}

std::string formatted(const query::QueryResult& r, const std::optional<std::string>& format) {
  auto f = format ? cli::resultFormatFromName(*format) : cli::defaultFormat(r.form);
  if (!f) throw Error(ErrorKind::Usage, "unknown result format: " + *format);
  return cli::formatResult(r, *f);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Query CSV, JSON, XML, YAML, Markdown and more as RDF with SPARQL.";

  // Held for the life of the process, so no destructor runs after the
  // interpreter is gone.
  static py::handle errorType = py::exception<Error>(m, "FacadexError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // The instance carries the error kind, e.g. "missing-file".
      py::object instance = errorType(std::string(e.what()));
      instance.attr("kind") = std::string(toString(e.kind()));
      PyErr_SetObject(errorType.ptr(), instance.ptr());
    }
  });

  m.def(
      "query",
      [](const std::string& text, std::optional<std::filesystem::path> load, std::optional<std::string> format,
         std::optional<long> timeout_ms) { return formatted(run(text, load, timeout_ms), format); },
      py::arg("text"), py::kw_only(), py::arg("load") = py::none(), py::arg("format") = py::none(),
      py::arg("timeout_ms") = py::none(),
      "Runs a query and returns the serialized result (JSON for SELECT/ASK and Turtle for CONSTRUCT by default).");

  m.def(
      "select",
      [](const std::string& text, std::optional<std::filesystem::path> load) {
        auto r = run(text, load, std::nullopt);
        if (r.form != query::QueryForm::Select) throw Error(ErrorKind::Usage, "select() needs a SELECT query");
        std::vector<std::map<std::string, std::string>> rows;
        for (const auto& row : r.solutions.rows) {
          std::map<std::string, std::string> out;
          for (const auto& [k, v] : row) out[k] = v.toNTriples();
          rows.push_back(std::move(out));
        }
        return rows;
      },
      py::arg("text"), py::kw_only(), py::arg("load") = py::none(),
      "Runs a SELECT query. Each row maps variable names to N-Triples terms.");

  m.def(
      "ask",
      [](const std::string& text, std::optional<std::filesystem::path> load) {
        auto r = run(text, load, std::nullopt);
        if (r.form != query::QueryForm::Ask) throw Error(ErrorKind::Usage, "ask() needs an ASK query");
        return r.boolean;
      },
      py::arg("text"), py::kw_only(), py::arg("load") = py::none());

  m.def(
      "triplify",
      [](const std::string& content, const std::string& media_type, const std::map<std::string, std::string>& options,
         const std::string& format) {
        return rdf::serialize(triplify::triplifyContent(content, media_type, toOptions(options)), rdfFormat(format));
      },
      py::arg("content"), py::arg("media_type"), py::arg("options") = std::map<std::string, std::string>{},
      py::arg("format") = "NT", "Triplifies in-memory content and serializes the Façade-X graph.");

  m.def(
      "triplify_location",
      [](const std::string& location, const std::map<std::string, std::string>& options, const std::string& format) {
        auto o = toOptions(options);
        auto source = resolve::resolve(config::SourceSpec::location(location), o);
        return rdf::serialize(triplify::triplify(source, o), rdfFormat(format));
      },
      py::arg("location"), py::arg("options") = std::map<std::string, std::string>{}, py::arg("format") = "NT",
      "Triplifies a file, directory or URL.");

  m.def(
      "isomorphic",
      [](const std::string& a, const std::string& b, const std::string& format) {
        auto f = rdfFormat(format);
        return rdf::isomorphic(rdf::parseRdf(a, f), rdf::parseRdf(b, f));
      },
      py::arg("a"), py::arg("b"), py::arg("format") = "NT");
}
