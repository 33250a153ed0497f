#include "facadex/cli/basil.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "facadex/cli/results.hpp"
#include "facadex/error.hpp"
#include "facadex/rdf/term.hpp"
#include "facadex/util/text.hpp"

namespace facadex::cli {
namespace {

bool isNameChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Reads a parameter reference at text[i] ('?' or '$'). Returns the reference
// and the length consumed, or nullopt for an ordinary variable.
std::optional<std::pair<ParameterRef, std::size_t>> readParameter(std::string_view text, std::size_t i) {
  if (text[i] != '?' && text[i] != '$') return std::nullopt;
  std::size_t j = i + 1;
  while (j < text.size() && isNameChar(text[j])) ++j;
  auto name = text.substr(i + 1, j - i - 1);
  if (name.size() > 2 && name.starts_with("__")) return std::pair{ParameterRef{std::string(name.substr(2)), true}, j - i};
  if (name.size() > 1 && name[0] == '_' && name[1] != '_') {
    return std::pair{ParameterRef{std::string(name.substr(1)), false}, j - i};
  }
  return std::nullopt;
}

using Replacer = std::function<std::string(const ParameterRef&, bool raw)>;

std::size_t iriEnd(std::string_view text, std::size_t i) {
  std::size_t j = i + 1;
  while (j < text.size()) {
    char c = text[j];
    if (c == '>') return j;
    if (static_cast<unsigned char>(c) <= 0x20 || std::string_view("<\"{}|^`\\").find(c) != std::string_view::npos) break;
    ++j;
  }
  return std::string_view::npos;
}

// Walks the query text, leaving comments alone and handing every parameter
// reference to `replace` together with its context.
std::string scan(std::string_view text, const Replacer& replace) {
  std::string out;
  std::size_t i = 0;
  auto copyRegion = [&](std::size_t end) {
    while (i < end) {
      if (auto p = readParameter(text, i); p && i + p->second <= end) {
        out += replace(p->first, true);
        i += p->second;
      } else {
        out += text[i++];
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      auto eol = text.find('\n', i);
      if (eol == std::string_view::npos) eol = text.size();
      out.append(text.substr(i, eol - i));
      i = eol;
    } else if (c == '"' || c == '\'') {
      std::string_view quote = text.substr(i, 3) == std::string(3, c) ? text.substr(i, 3) : text.substr(i, 1);
      out.append(quote);
      i += quote.size();
      std::size_t j = i;
      while (j < text.size() && text.substr(j, quote.size()) != quote) j += text[j] == '\\' ? 2 : 1;
      j = std::min(j, text.size());
      copyRegion(j);
      out.append(text.substr(j, quote.size()));
      i = std::min(text.size(), j + quote.size());
    } else if (c == '<' && iriEnd(text, i) != std::string_view::npos) {
      auto end = iriEnd(text, i);
      out += '<';
      ++i;
      copyRegion(end);
      out += '>';
      i = end + 1;
    } else if (auto p = readParameter(text, i)) {
      out += replace(p->first, false);
      i += p->second;
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

std::string lookup(const ParameterRef& ref, const ParameterRow& row) {
  auto it = row.find(ref.name);
  if (it != row.end()) return it->second;
  if (ref.optional) return "";
  throw Error(ErrorKind::Usage, "no value for required parameter ?_" + ref.name);
}

// RFC 4180 records.
std::vector<std::vector<std::string>> parseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = any = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      field.clear();
      record.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(ErrorKind::Format, "unterminated quoted field in parameter CSV");
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace

std::vector<ParameterRef> findParameters(std::string_view query) {
  std::vector<ParameterRef> refs;
  scan(query, [&](const ParameterRef& ref, bool) {
    bool seen = false;
    for (const auto& r : refs) seen = seen || r.name == ref.name;
    if (!seen) refs.push_back(ref);
    return std::string();
  });
  return refs;
}

std::string substituteParameters(std::string_view query, const ParameterRow& row) {
  return scan(query, [&](const ParameterRef& ref, bool raw) {
    auto value = lookup(ref, row);
    return raw ? value : "\"" + rdf::escapeLiteral(value) + "\"";
  });
}

std::vector<std::string> expandBasilParameters(std::string_view query, const std::vector<ParameterRow>& rows) {
  if (rows.empty()) {
    std::string missing;
    for (const auto& ref : findParameters(query)) {
      if (!ref.optional) missing += (missing.empty() ? "?_" : ", ?_") + ref.name;
    }
    if (!missing.empty()) throw Error(ErrorKind::Usage, "query needs parameter values for " + missing);
    return {substituteParameters(query, {})};
  }
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(substituteParameters(query, row));
  return out;
}

std::string expandOutputPattern(std::string_view pattern, const ParameterRow& row) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size();) {
    if (auto p = readParameter(pattern, i)) {
      out += lookup(p->first, row);
      i += p->second;
    } else {
      out += pattern[i++];
    }
  }
  return out;
}

std::vector<ParameterRow> parseParameterText(std::string_view text) {
  std::vector<ParameterRow> rows;
  if (util::trim(text).starts_with("{")) {
    auto result = parseResultsJson(text);
    for (const auto& solution : result.solutions.rows) {
      ParameterRow row;
      for (const auto& [var, term] : solution) row.emplace(var, term.value());
      rows.push_back(std::move(row));
    }
    return rows;
  }
  auto records = parseCsv(text);
  if (records.empty()) return rows;
  const auto& header = records.front();
  for (std::size_t r = 1; r < records.size(); ++r) {
    ParameterRow row;
    for (std::size_t c = 0; c < header.size() && c < records[r].size(); ++c) {
      if (!records[r][c].empty()) row.emplace(std::string(util::trim(header[c])), records[r][c]);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ParameterRow> readParameterFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, "cannot read parameter file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseParameterText(buf.str());
}

ParameterRow parseInlineValues(const std::vector<std::string>& pairs) {
  ParameterRow row;
  for (const auto& pair : pairs) {
    auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorKind::Usage, "expected name=value, got '" + pair + "'");
    }
    row[pair.substr(0, eq)] = pair.substr(eq + 1);
  }
  return row;
}

}  // namespace facadex::cli
