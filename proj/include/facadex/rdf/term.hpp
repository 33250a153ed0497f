#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "facadex/rdf/vocab.hpp"

namespace facadex::rdf {

enum class TermKind : std::uint8_t { Iri, Blank, Literal };

// An RDF term. Literals always carry a datatype; language-tagged literals
// carry rdf:langString plus the tag. Plain strings are xsd:string.
class Term {
 public:
  Term() = default;

  // Throws Error(Syntax) unless `iri` starts with a scheme.
  static Term iri(std::string iri);
  static Term blank(std::string label);
  static Term literal(std::string lexical,
                      std::string datatype = std::string(vocab::kXsdString));
  static Term langLiteral(std::string lexical, std::string language);

  static Term boolean(bool value);
  static Term integer(std::int64_t value,
                      std::string_view datatype = vocab::kXsdInteger);

  TermKind kind() const noexcept { return kind_; }
  bool isIri() const noexcept { return kind_ == TermKind::Iri; }
  bool isBlank() const noexcept { return kind_ == TermKind::Blank; }
  bool isLiteral() const noexcept { return kind_ == TermKind::Literal; }

  // IRI string, blank-node label, or literal lexical form.
  const std::string& value() const noexcept { return value_; }
  const std::string& datatype() const noexcept { return datatype_; }
  const std::string& language() const noexcept { return language_; }
  bool hasLanguage() const noexcept { return !language_.empty(); }
  bool isPlainString() const noexcept {
    return isLiteral() && language_.empty() && datatype_ == vocab::kXsdString;
  }

  // N-Triples rendering: <iri>, _:label, "lex"^^<dt>, "lex"@lang.
  std::string toNTriples() const;

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;

 private:
  TermKind kind_ = TermKind::Blank;
  std::string value_;
  std::string datatype_;
  std::string language_;
};

bool hasScheme(std::string_view iri);

// rdf:_n for n >= 1; Error(InvalidIndex) otherwise.
Term mkContainerMembership(std::int64_t n);
// n when `p` is exactly rdf:_n with n >= 1.
std::optional<std::int64_t> membershipIndex(const Term& p);
std::optional<std::int64_t> membershipIndex(std::string_view iri);

std::string escapeLiteral(std::string_view lexical);

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept;
};

}  // namespace facadex::rdf
