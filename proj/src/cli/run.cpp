#include "facadex/cli/run.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "facadex/cli/basil.hpp"
#include "facadex/cli/results.hpp"
#include "facadex/error.hpp"
#include "facadex/query/parser.hpp"
#include "facadex/rdf/io.hpp"

namespace facadex::cli {
namespace {

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string queryText(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return readFile(arg);
  if (arg.find_first_of(" \t\n{") != std::string::npos) return arg;
  throw Error(ErrorKind::MissingFile, "query file not found: " + arg);
}

void writeFile(const std::filesystem::path& path, const std::string& bytes, bool append) {
  std::ofstream f(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path.string());
  f << bytes;
}

int exitCodeFor(const Error& e) { return e.kind() == ErrorKind::Usage ? kExitUsage : kExitFailure; }

}  // namespace

int run(const Invocation& inv, std::ostream& out, std::ostream& err) {
  std::optional<ResultFormat> format;
  std::string text;
  std::vector<ParameterRow> rows;
  rdf::Dataset base;
  try {
    if (inv.query.empty()) throw Error(ErrorKind::Usage, "a query is required (-q)");
    if (inv.format) {
      format = resultFormatFromName(*inv.format);
      if (!format) throw Error(ErrorKind::Usage, "unknown output format '" + *inv.format + "'");
    }
    if (inv.outputPattern && !inv.valuesFile && inv.inlineValues.empty()) {
      throw Error(ErrorKind::Usage, "-p needs parameter values from -i or -v");
    }
    auto inlineRow = parseInlineValues(inv.inlineValues);
    if (inv.valuesFile) {
      rows = readParameterFile(*inv.valuesFile);
      for (auto& row : rows) {
        for (const auto& [k, v] : inlineRow) row[k] = v;
      }
    } else if (!inv.inlineValues.empty()) {
      rows.push_back(inlineRow);
    }
    text = queryText(inv.query);
    if (rows.empty()) expandBasilParameters(text, rows);  // fails early on missing parameters
    if (inv.load) base = rdf::loadRdf(*inv.load);
  } catch (const Error& e) {
    err << "fx: " << e.what() << "\n";
    return exitCodeFor(e);
  }

  query::EngineOptions options;
  options.timeout = inv.timeout;
  int status = kExitOk;
  bool firstWrite = true;
  std::size_t count = rows.empty() ? 1 : rows.size();
  for (std::size_t i = 0; i < count; ++i) {
    const ParameterRow empty;
    const auto& row = rows.empty() ? empty : rows[i];
    try {
      auto q = query::parseQuery(substituteParameters(text, row));
      auto fmt = format.value_or(defaultFormat(q.form));
      if (!compatible(fmt, q.form)) {
        throw Error(ErrorKind::Usage, "output format " + std::string(nameOf(fmt)) + " does not fit this query form");
      }
      auto result = query::execute(q, base, options);
      auto bytes = formatResult(result, fmt);
      if (inv.outputPattern) {
        writeFile(expandOutputPattern(*inv.outputPattern, row), bytes, false);
      } else if (inv.output) {
        writeFile(*inv.output, bytes, !firstWrite);
        firstWrite = false;
      } else {
        out << bytes;
      }
    } catch (const Error& e) {
      err << "fx: " << (count > 1 ? "row " + std::to_string(i + 1) + ": " : "") << e.what() << "\n";
      status = std::max(status, exitCodeFor(e));
    } catch (const std::exception& e) {
      err << "fx: " << e.what() << "\n";
      status = std::max(status, kExitFailure);
    }
  }
  out.flush();
  return status;
}

}  // namespace facadex::cli
