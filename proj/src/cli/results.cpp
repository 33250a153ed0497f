#include "facadex/cli/results.hpp"

#include <algorithm>
#include <json.hpp>

#include "facadex/error.hpp"
#include "facadex/rdf/io.hpp"
#include "facadex/util/text.hpp"

namespace facadex::cli {
namespace {

using nlohmann::json;

json termJson(const rdf::Term& t) {
  json j;
  if (t.isIri()) {
    j["type"] = "uri";
  } else if (t.isBlank()) {
    j["type"] = "bnode";
  } else {
    j["type"] = "literal";
    if (t.hasLanguage()) {
      j["xml:lang"] = t.language();
    } else if (t.datatype() != vocab::kXsdString) {
      j["datatype"] = t.datatype();
    }
  }
  j["value"] = t.value();
  return j;
}

std::string toJson(const query::QueryResult& r) {
  json doc;
  if (r.form == query::QueryForm::Ask) {
    doc["head"] = json::object();
    doc["boolean"] = r.boolean;
    return doc.dump(2) + "\n";
  }
  doc["head"]["vars"] = r.solutions.variables;
  json bindings = json::array();
  for (const auto& row : r.solutions.rows) {
    json b = json::object();
    for (const auto& [var, term] : row) b[var] = termJson(term);
    bindings.push_back(std::move(b));
  }
  doc["results"]["bindings"] = std::move(bindings);
  return doc.dump(2) + "\n";
}

std::string xmlEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string toXml(const query::QueryResult& r) {
  std::string out =
      "<?xml version=\"1.0\"?>\n<sparql xmlns=\"http://www.w3.org/2005/sparql-results#\">\n";
  if (r.form == query::QueryForm::Ask) {
    out += "  <head/>\n  <boolean>";
    out += r.boolean ? "true" : "false";
    out += "</boolean>\n</sparql>\n";
    return out;
  }
  out += "  <head>\n";
  for (const auto& v : r.solutions.variables) out += "    <variable name=\"" + xmlEscape(v) + "\"/>\n";
  out += "  </head>\n  <results>\n";
  for (const auto& row : r.solutions.rows) {
    out += "    <result>\n";
    for (const auto& v : r.solutions.variables) {
      auto it = row.find(v);
      if (it == row.end()) continue;
      const auto& t = it->second;
      out += "      <binding name=\"" + xmlEscape(v) + "\">";
      if (t.isIri()) {
        out += "<uri>" + xmlEscape(t.value()) + "</uri>";
      } else if (t.isBlank()) {
        out += "<bnode>" + xmlEscape(t.value()) + "</bnode>";
      } else if (t.hasLanguage()) {
        out += "<literal xml:lang=\"" + xmlEscape(t.language()) + "\">" + xmlEscape(t.value()) + "</literal>";
      } else if (t.datatype() != vocab::kXsdString) {
        out += "<literal datatype=\"" + xmlEscape(t.datatype()) + "\">" + xmlEscape(t.value()) + "</literal>";
      } else {
        out += "<literal>" + xmlEscape(t.value()) + "</literal>";
      }
      out += "</binding>\n";
    }
    out += "    </result>\n";
  }
  out += "  </results>\n</sparql>\n";
  return out;
}

std::string csvField(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string toCsv(const query::QueryResult& r) {
  if (r.form == query::QueryForm::Ask) {
    return std::string("_askResult\r\n") + (r.boolean ? "true" : "false") + "\r\n";
  }
  std::string out;
  const auto& vars = r.solutions.variables;
  for (std::size_t i = 0; i < vars.size(); ++i) out += (i ? "," : "") + csvField(vars[i]);
  out += "\r\n";
  for (const auto& row : r.solutions.rows) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (i) out += ',';
      auto it = row.find(vars[i]);
      if (it == row.end()) continue;
      const auto& t = it->second;
      out += csvField(t.isBlank() ? "_:" + t.value() : t.value());
    }
    out += "\r\n";
  }
  return out;
}

bool isBareNumeric(const rdf::Term& t) {
  return t.isLiteral() && !t.hasLanguage() &&
         (t.datatype() == vocab::kXsdInteger || t.datatype() == vocab::kXsdDecimal ||
          t.datatype() == vocab::kXsdBoolean);
}

std::string textCell(const rdf::Term& t) {
  if (t.isPlainString()) return "\"" + rdf::escapeLiteral(t.value()) + "\"";
  if (isBareNumeric(t)) return t.value();
  return t.toNTriples();
}

// Counts code points so that non-ASCII values keep the columns aligned.
std::size_t displayWidth(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string toText(const query::QueryResult& r) {
  if (r.form == query::QueryForm::Ask) return std::string("ask: ") + (r.boolean ? "true" : "false") + "\n";
  const auto& vars = r.solutions.variables;
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> widths;
  for (const auto& v : vars) widths.push_back(displayWidth(v) + 1);
  for (const auto& row : r.solutions.rows) {
    std::vector<std::string> line;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      auto it = row.find(vars[i]);
      line.push_back(it == row.end() ? "" : textCell(it->second));
      widths[i] = std::max(widths[i], displayWidth(line.back()));
    }
    cells.push_back(std::move(line));
  }
  std::size_t total = 1;
  for (auto w : widths) total += w + 3;
  auto renderLine = [&](const std::vector<std::string>& values) {
    std::string out = "|";
    for (std::size_t i = 0; i < values.size(); ++i) {
      out += " " + values[i] + std::string(widths[i] - displayWidth(values[i]), ' ') + " |";
    }
    return out + "\n";
  };
  std::vector<std::string> header;
  for (const auto& v : vars) header.push_back("?" + v);
  std::string out = std::string(total, '-') + "\n";
  out += renderLine(header);
  out += std::string(total, '=') + "\n";
  for (const auto& line : cells) out += renderLine(line);
  out += std::string(total, '-') + "\n";
  return out;
}

rdf::Term termFromJson(const json& j) {
  auto type = j.at("type").get<std::string>();
  auto value = j.at("value").get<std::string>();
  if (type == "uri") return rdf::Term::iri(value);
  if (type == "bnode") return rdf::Term::blank(value);
  if (type == "literal" || type == "typed-literal") {
    if (j.contains("xml:lang")) return rdf::Term::langLiteral(value, j["xml:lang"].get<std::string>());
    if (j.contains("datatype")) return rdf::Term::literal(value, j["datatype"].get<std::string>());
    return rdf::Term::literal(value);
  }
  throw Error(ErrorKind::Syntax, "unknown term type in results JSON: " + type);
}

}  // namespace

std::optional<ResultFormat> resultFormatFromName(std::string_view name) {
  auto n = util::toUpper(name);
  if (n == "JSON") return ResultFormat::Json;
  if (n == "XML") return ResultFormat::Xml;
  if (n == "CSV") return ResultFormat::Csv;
  if (n == "TEXT") return ResultFormat::Text;
  if (n == "TTL") return ResultFormat::Turtle;
  if (n == "NT") return ResultFormat::NTriples;
  if (n == "NQ") return ResultFormat::NQuads;
  return std::nullopt;
}

std::string_view nameOf(ResultFormat format) {
  switch (format) {
    case ResultFormat::Json: return "JSON";
    case ResultFormat::Xml: return "XML";
    case ResultFormat::Csv: return "CSV";
    case ResultFormat::Text: return "TEXT";
    case ResultFormat::Turtle: return "TTL";
    case ResultFormat::NTriples: return "NT";
    case ResultFormat::NQuads: return "NQ";
  }
  return "";
}

std::string_view mediaTypeOf(ResultFormat format) {
  switch (format) {
    case ResultFormat::Json: return "application/sparql-results+json";
    case ResultFormat::Xml: return "application/sparql-results+xml";
    case ResultFormat::Csv: return "text/csv";
    case ResultFormat::Text: return "text/plain";
    case ResultFormat::Turtle: return rdf::mediaTypeOf(rdf::RdfFormat::Turtle);
    case ResultFormat::NTriples: return rdf::mediaTypeOf(rdf::RdfFormat::NTriples);
    case ResultFormat::NQuads: return rdf::mediaTypeOf(rdf::RdfFormat::NQuads);
  }
  return "";
}

bool compatible(ResultFormat format, query::QueryForm form) {
  bool graphFormat = format == ResultFormat::Turtle || format == ResultFormat::NTriples ||
                     format == ResultFormat::NQuads;
  return graphFormat == (form == query::QueryForm::Construct);
}

ResultFormat defaultFormat(query::QueryForm form) {
  return form == query::QueryForm::Construct ? ResultFormat::Turtle : ResultFormat::Json;
}

std::string formatResult(const query::QueryResult& result, ResultFormat format) {
  if (!compatible(format, result.form)) {
    throw Error(ErrorKind::Usage, "output format " + std::string(nameOf(format)) +
                                      " does not fit this query form");
  }
  switch (format) {
    case ResultFormat::Json: return toJson(result);
    case ResultFormat::Xml: return toXml(result);
    case ResultFormat::Csv: return toCsv(result);
    case ResultFormat::Text: return toText(result);
    case ResultFormat::Turtle: return rdf::serialize(result.graph, rdf::RdfFormat::Turtle);
    case ResultFormat::NTriples: return rdf::serialize(result.graph, rdf::RdfFormat::NTriples);
    case ResultFormat::NQuads: return rdf::serialize(result.graph, rdf::RdfFormat::NQuads);
  }
  return {};
}

query::QueryResult parseResultsJson(std::string_view text) {
  query::QueryResult r;
  try {
    auto doc = json::parse(text);
    if (doc.contains("boolean")) {
      r.form = query::QueryForm::Ask;
      r.boolean = doc["boolean"].get<bool>();
      return r;
    }
    r.form = query::QueryForm::Select;
    if (doc.contains("head") && doc["head"].contains("vars")) {
      r.solutions.variables = doc["head"]["vars"].get<std::vector<std::string>>();
    }
    for (const auto& b : doc.at("results").at("bindings")) {
      query::Solution row;
      for (const auto& [var, term] : b.items()) row.emplace(var, termFromJson(term));
      r.solutions.rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Syntax, std::string("malformed SPARQL results JSON: ") + e.what());
  }
  return r;
}

}  // namespace facadex::cli
