#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "facadex/query/algebra.hpp"

namespace facadex::config {

namespace opt {
inline constexpr std::string_view kLocation = "location";
inline constexpr std::string_view kContent = "content";
inline constexpr std::string_view kCommand = "command";
inline constexpr std::string_view kMediaType = "media-type";
inline constexpr std::string_view kCharset = "charset";
inline constexpr std::string_view kNamespace = "namespace";
inline constexpr std::string_view kBlankNodes = "blank-nodes";
inline constexpr std::string_view kTrimStrings = "trim-strings";
inline constexpr std::string_view kNullString = "null-string";
inline constexpr std::string_view kStrategy = "strategy";
inline constexpr std::string_view kSlice = "slice";
inline constexpr std::string_view kCsvHeaders = "csv.headers";
inline constexpr std::string_view kCsvDelimiter = "csv.delimiter";
inline constexpr std::string_view kJsonPath = "json.path";
inline constexpr std::string_view kXmlPath = "xml.path";
inline constexpr std::string_view kHtmlSelector = "html.selector";
inline constexpr std::string_view kTxtRegex = "txt.regex";
inline constexpr std::string_view kTxtSplit = "txt.split";
inline constexpr std::string_view kHttpMethod = "http.method";
inline constexpr std::string_view kHttpHeaderPrefix = "http.header.";
inline constexpr std::string_view kHttpQueryPrefix = "http.query.";
inline constexpr std::string_view kHttpAuthUser = "http.auth.user";
inline constexpr std::string_view kHttpAuthPassword = "http.auth.password";
inline constexpr std::string_view kMetadata = "metadata";
inline constexpr std::string_view kOndisk = "ondisk";
}  // namespace opt

// Exactly one of location / content / command.
struct SourceSpec {
  enum class Kind { Location, Content, Command };

  Kind kind = Kind::Location;
  std::string value;

  static SourceSpec location(std::string v) { return {Kind::Location, std::move(v)}; }
  static SourceSpec content(std::string v) { return {Kind::Content, std::move(v)}; }
  static SourceSpec command(std::string v) { return {Kind::Command, std::move(v)}; }

  std::string_view optionName() const;
  // "location=./a.csv" style description used in diagnostics.
  std::string describe() const;

  bool operator==(const SourceSpec&) const = default;
};

// Normalises an option name: lowercase, with `http.query.param.X` folded onto
// `http.query.X`. The suffix of http.header.* / http.query.* keeps its case.
std::string normalizeOptionName(std::string_view name);

class FacadeOptions {
 public:
  FacadeOptions() = default;
  FacadeOptions(std::initializer_list<std::pair<const std::string, std::string>> init);

  void set(std::string_view name, std::string value);
  bool contains(std::string_view name) const;
  std::optional<std::string> get(std::string_view name) const;
  std::string getOr(std::string_view name, std::string_view fallback) const;
  // Error(Config) unless the stored value is exactly "true" or "false".
  bool getBool(std::string_view name, bool fallback) const;
  void erase(std::string_view name);

  // Entries whose names start with `prefix`, with the prefix stripped.
  std::vector<std::pair<std::string, std::string>> withPrefix(std::string_view prefix) const;

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  // The source entry, if exactly one is present. Error(ConflictingSource)
  // if several are.
  std::optional<SourceSpec> source() const;
  FacadeOptions withoutSource() const;

  bool operator==(const FacadeOptions&) const = default;

 private:
  std::map<std::string, std::string> entries_;
};

// Checks value domains and feature support. Returns warnings for unknown
// option names; throws Error(Config) for malformed values and
// Error(Unsupported) for ondisk / metadata=true.
std::vector<std::string> validateOptions(const FacadeOptions& options);

struct ServiceIri {
  FacadeOptions options;
  std::optional<SourceSpec> source;
};

// Parses `x-sparql-anything:k=v,k=v,...`. %2C and %3D in values decode to
// ',' and '='. A segment without '=' is a bare location.
ServiceIri parseServiceIri(std::string_view iri);
// Inverse of parseServiceIri, used for round-trip checks and diagnostics.
std::string encodeServiceIri(const FacadeOptions& options, const std::optional<SourceSpec>& source);

struct InlineConfig {
  FacadeOptions fixed;
  std::map<std::string, std::string> variableBound;  // option name -> variable
  std::vector<query::TriplePattern> residual;
};

// Pulls `fx:properties fx:<option> value` triples out of a basic graph
// pattern.
InlineConfig extractInlineProperties(const std::vector<query::TriplePattern>& pattern);

// Union of both maps; on a conflicting key the inline value wins. Two
// different source kinds across the inputs raise Error(ConflictingSource).
FacadeOptions mergeOptions(const FacadeOptions& fromIri, const FacadeOptions& inline_);

// Media type without parameters, lowercase. Never fails.
std::string guessMediaType(const SourceSpec& spec, const FacadeOptions& options);
// The charset parameter of a media-type value, if any.
std::optional<std::string> charsetParameter(std::string_view mediaType);

}  // namespace facadex::config
