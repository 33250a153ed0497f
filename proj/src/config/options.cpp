#include "facadex/config/options.hpp"

#include <algorithm>
#include <array>
#include <filesystem>

#include "facadex/error.hpp"
#include "facadex/rdf/vocab.hpp"
#include "facadex/util/text.hpp"

namespace facadex::config {
namespace {

constexpr std::array<std::string_view, 3> kSourceKeys{opt::kLocation, opt::kContent,
                                                      opt::kCommand};

constexpr std::array<std::string_view, 22> kKnownOptions{
    opt::kLocation,     opt::kContent,      opt::kCommand,     opt::kMediaType,
    opt::kCharset,      opt::kNamespace,    opt::kBlankNodes,  opt::kTrimStrings,
    opt::kNullString,   opt::kStrategy,     opt::kSlice,       opt::kCsvHeaders,
    opt::kCsvDelimiter, opt::kJsonPath,     opt::kXmlPath,     opt::kHtmlSelector,
    opt::kTxtRegex,     opt::kTxtSplit,     opt::kHttpMethod,  opt::kHttpAuthUser,
    opt::kHttpAuthPassword, opt::kMetadata,
};

constexpr std::array<std::string_view, 4> kBooleanOptions{opt::kCsvHeaders, opt::kBlankNodes,
                                                          opt::kTrimStrings, opt::kSlice};

bool isKnown(std::string_view name) {
  if (name == opt::kOndisk) return true;
  if (name.starts_with(opt::kHttpHeaderPrefix) || name.starts_with(opt::kHttpQueryPrefix))
    return true;
  return std::find(kKnownOptions.begin(), kKnownOptions.end(), name) != kKnownOptions.end();
}

std::string decodeValue(std::string_view v) {
  std::string out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == '%' && i + 2 < v.size()) {
      auto code = util::toLower(v.substr(i + 1, 2));
      if (code == "2c") {
        out += ',';
        i += 2;
        continue;
      }
      if (code == "3d") {
        out += '=';
        i += 2;
        continue;
      }
    }
    out += v[i];
  }
  return out;
}

std::string encodeValue(std::string_view v) {
  std::string out;
  for (char c : v) {
    if (c == ',') {
      out += "%2C";
    } else if (c == '=') {
      out += "%3D";
    } else {
      out += c;
    }
  }
  return out;
}

std::string stripQueryAndFragment(std::string_view location) {
  if (rdf::hasScheme(location)) {
    auto cut = location.find_first_of("?#");
    return std::string(location.substr(0, cut));
  }
  return std::string(location);
}

}  // namespace

std::string_view SourceSpec::optionName() const {
  switch (kind) {
    case Kind::Location: return opt::kLocation;
    case Kind::Content: return opt::kContent;
    case Kind::Command: return opt::kCommand;
  }
  return opt::kLocation;
}

std::string SourceSpec::describe() const {
  std::string shown = value.size() > 80 ? value.substr(0, 77) + "..." : value;
  return std::string(optionName()) + "=" + shown;
}

std::string normalizeOptionName(std::string_view name) {
  auto lower = util::toLower(name);
  for (auto prefix : {opt::kHttpHeaderPrefix, opt::kHttpQueryPrefix}) {
    if (lower.starts_with(prefix)) {
      std::string suffix(name.substr(prefix.size()));
      if (prefix == opt::kHttpQueryPrefix && util::toLower(suffix).starts_with("param.")) {
        suffix = suffix.substr(6);
      }
      return std::string(prefix) + suffix;
    }
  }
  return lower;
}

FacadeOptions::FacadeOptions(
    std::initializer_list<std::pair<const std::string, std::string>> init) {
  for (const auto& [k, v] : init) set(k, v);
}

void FacadeOptions::set(std::string_view name, std::string value) {
  entries_[normalizeOptionName(name)] = std::move(value);
}

bool FacadeOptions::contains(std::string_view name) const {
  return entries_.contains(normalizeOptionName(name));
}

std::optional<std::string> FacadeOptions::get(std::string_view name) const {
  auto it = entries_.find(normalizeOptionName(name));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string FacadeOptions::getOr(std::string_view name, std::string_view fallback) const {
  auto v = get(name);
  return v ? *v : std::string(fallback);
}

bool FacadeOptions::getBool(std::string_view name, bool fallback) const {
  auto v = get(name);
  if (!v) return fallback;
  if (*v == "true") return true;
  if (*v == "false") return false;
  throw Error(ErrorKind::Config,
              "option " + std::string(name) + " expects true or false, got '" + *v + "'");
}

void FacadeOptions::erase(std::string_view name) { entries_.erase(normalizeOptionName(name)); }

std::vector<std::pair<std::string, std::string>> FacadeOptions::withPrefix(
    std::string_view prefix) const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, v] : entries_) {
    if (k.starts_with(prefix)) out.emplace_back(k.substr(prefix.size()), v);
  }
  return out;
}

std::optional<SourceSpec> FacadeOptions::source() const {
  std::optional<SourceSpec> found;
  for (auto key : kSourceKeys) {
    auto v = get(key);
    if (!v) continue;
    if (found) {
      throw Error(ErrorKind::ConflictingSource, "both " + std::string(found->optionName()) +
                                                    " and " + std::string(key) +
                                                    " specify the source");
    }
    if (key == opt::kLocation) found = SourceSpec::location(*v);
    if (key == opt::kContent) found = SourceSpec::content(*v);
    if (key == opt::kCommand) found = SourceSpec::command(*v);
  }
  return found;
}

FacadeOptions FacadeOptions::withoutSource() const {
  FacadeOptions out = *this;
  for (auto key : kSourceKeys) out.erase(key);
  return out;
}

std::vector<std::string> validateOptions(const FacadeOptions& options) {
  std::vector<std::string> warnings;
  for (const auto& [name, value] : options.entries()) {
    if (!isKnown(name)) warnings.push_back("unknown option '" + name + "' ignored");
  }
  for (auto name : kBooleanOptions) options.getBool(name, false);
  if (auto s = options.get(opt::kStrategy); s && *s != "0" && *s != "1") {
    throw Error(ErrorKind::Config, "option strategy expects 0 or 1, got '" + *s + "'");
  }
  if (auto m = options.get(opt::kMetadata)) {
    if (*m != "true" && *m != "false") {
      throw Error(ErrorKind::Config, "option metadata expects true or false, got '" + *m + "'");
    }
    if (*m == "true") {
      throw Error(ErrorKind::Unsupported, "unsupported feature: metadata extraction");
    }
  }
  if (options.contains(opt::kOndisk)) {
    throw Error(ErrorKind::Unsupported, "unsupported strategy: ondisk");
  }
  if (auto d = options.get(opt::kCsvDelimiter)) {
    if (d->size() != 1 && *d != "\\t") {
      throw Error(ErrorKind::Config, "csv.delimiter must be a single character");
    }
  }
  if (options.contains(opt::kTxtRegex) && options.contains(opt::kTxtSplit)) {
    throw Error(ErrorKind::Config, "txt.regex and txt.split are mutually exclusive");
  }
  return warnings;
}

ServiceIri parseServiceIri(std::string_view iri) {
  if (!iri.starts_with(vocab::kServiceScheme)) {
    throw Error(ErrorKind::UnsupportedEndpoint,
                "not an x-sparql-anything IRI: <" + std::string(iri) + ">");
  }
  auto rest = iri.substr(vocab::kServiceScheme.size());
  FacadeOptions all;
  std::optional<std::string> bare;
  for (const auto& segment : util::split(rest, ',')) {
    if (segment.empty()) continue;
    auto eq = segment.find('=');
    if (eq == std::string::npos) {
      if (bare) {
        throw Error(ErrorKind::ConflictingSource,
                    "two bare locations in service IRI: " + *bare + ", " + segment);
      }
      bare = decodeValue(segment);
      continue;
    }
    auto key = normalizeOptionName(segment.substr(0, eq));
    bool isSource = std::find(kSourceKeys.begin(), kSourceKeys.end(), key) != kSourceKeys.end();
    if (isSource && all.contains(key)) {
      throw Error(ErrorKind::ConflictingSource, "option " + key + " given twice");
    }
    all.set(key, decodeValue(segment.substr(eq + 1)));
  }
  if (bare) {
    if (all.contains(opt::kLocation)) {
      throw Error(ErrorKind::ConflictingSource, "bare location and location= both given");
    }
    all.set(opt::kLocation, *bare);
  }
  ServiceIri out;
  out.source = all.source();
  out.options = all.withoutSource();
  return out;
}

std::string encodeServiceIri(const FacadeOptions& options,
                             const std::optional<SourceSpec>& source) {
  std::string out(vocab::kServiceScheme);
  bool first = true;
  auto append = [&](std::string_view k, std::string_view v) {
    if (!first) out += ',';
    first = false;
    out += k;
    out += '=';
    out += encodeValue(v);
  };
  for (const auto& [k, v] : options.entries()) append(k, v);
  if (source) append(source->optionName(), source->value);
  return out;
}

InlineConfig extractInlineProperties(const std::vector<query::TriplePattern>& pattern) {
  InlineConfig out;
  for (const auto& tp : pattern) {
    bool isProperties = !query::isVar(tp.subject) && query::asTerm(tp.subject).isIri() &&
                        query::asTerm(tp.subject).value() == vocab::kFxProperties;
    if (!isProperties) {
      out.residual.push_back(tp);
      continue;
    }
    if (query::isVar(tp.predicate) || !query::asTerm(tp.predicate).isIri() ||
        !query::asTerm(tp.predicate).value().starts_with(vocab::kFx)) {
      throw Error(ErrorKind::Config,
                  "fx:properties only accepts fx:-prefixed option predicates");
    }
    auto name = normalizeOptionName(query::asTerm(tp.predicate).value().substr(vocab::kFx.size()));
    if (query::isVar(tp.object)) {
      const auto& var = query::asVar(tp.object);
      if (var.isAnonymous()) {
        throw Error(ErrorKind::Config, "fx:properties value for " + name + " is a blank node");
      }
      out.fixed.erase(name);
      out.variableBound[name] = var.name;
    } else {
      out.variableBound.erase(name);
      out.fixed.set(name, query::asTerm(tp.object).value());
    }
  }
  return out;
}

FacadeOptions mergeOptions(const FacadeOptions& fromIri, const FacadeOptions& inline_) {
  auto a = fromIri.source();
  auto b = inline_.source();
  if (a && b && a->kind != b->kind) {
    throw Error(ErrorKind::ConflictingSource,
                "service IRI gives " + a->describe() + " but fx:properties gives " + b->describe());
  }
  FacadeOptions out = fromIri;
  for (const auto& [k, v] : inline_.entries()) out.set(k, v);
  return out;
}

std::optional<std::string> charsetParameter(std::string_view mediaType) {
  auto lower = util::toLower(mediaType);
  auto pos = lower.find("charset=");
  if (pos == std::string::npos) return std::nullopt;
  auto value = mediaType.substr(pos + 8);
  auto end = value.find(';');
  auto cs = util::trim(value.substr(0, end));
  if (cs.size() >= 2 && cs.front() == '"' && cs.back() == '"') cs = cs.substr(1, cs.size() - 2);
  if (cs.empty()) return std::nullopt;
  return std::string(cs);
}

std::string guessMediaType(const SourceSpec& spec, const FacadeOptions& options) {
  if (auto explicitType = options.get(opt::kMediaType)) {
    auto base = util::trim(std::string_view(*explicitType).substr(0, explicitType->find(';')));
    if (!base.empty()) return util::toLower(base);
  }
  if (spec.kind != SourceSpec::Kind::Location) return "application/octet-stream";

  std::string path = stripQueryAndFragment(spec.value);
  if (!path.empty() && path.back() == '/') return "inode/directory";
  std::string local = path.starts_with("file://") ? path.substr(7) : path;
  if (!rdf::hasScheme(local) || path.starts_with("file://")) {
    std::error_code ec;
    if (std::filesystem::is_directory(local, ec)) return "inode/directory";
  }
  auto slash = path.find_last_of('/');
  auto name = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = name.find_last_of('.');
  if (dot == std::string::npos) return "application/octet-stream";
  auto ext = util::toLower(name.substr(dot + 1));
  static const std::map<std::string, std::string, std::less<>> kRegistry{
      {"csv", "text/csv"},          {"tsv", "text/csv"},
      {"json", "application/json"}, {"xml", "application/xml"},
      {"html", "text/html"},        {"htm", "text/html"},
      {"yaml", "text/yaml"},        {"yml", "text/yaml"},
      {"md", "text/markdown"},      {"bib", "application/x-bibtex"},
      {"txt", "text/plain"},        {"zip", "application/zip"},
      {"tar", "application/x-tar"},
  };
  auto it = kRegistry.find(ext);
  return it == kRegistry.end() ? "application/octet-stream" : it->second;
}

}  // namespace facadex::config
