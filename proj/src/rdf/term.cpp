#include "facadex/rdf/term.hpp"

#include <cctype>
#include <charconv>

#include "facadex/error.hpp"

namespace facadex::rdf {

bool hasScheme(std::string_view iri) {
  if (iri.empty() || !std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  for (std::size_t i = 1; i < iri.size(); ++i) {
    char c = iri[i];
    if (c == ':') return true;
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.')
      return false;
  }
  return false;
}

Term Term::iri(std::string iri) {
  if (!hasScheme(iri)) {
    throw Error(ErrorKind::Syntax, "not an absolute IRI: <" + iri + ">");
  }
  Term t;
  t.kind_ = TermKind::Iri;
  t.value_ = std::move(iri);
  return t;
}

Term Term::blank(std::string label) {
  Term t;
  t.kind_ = TermKind::Blank;
  t.value_ = std::move(label);
  return t;
}

Term Term::literal(std::string lexical, std::string datatype) {
  Term t;
  t.kind_ = TermKind::Literal;
  t.value_ = std::move(lexical);
  t.datatype_ = datatype.empty() ? std::string(vocab::kXsdString) : std::move(datatype);
  return t;
}

Term Term::langLiteral(std::string lexical, std::string language) {
  if (language.empty()) return literal(std::move(lexical));
  Term t;
  t.kind_ = TermKind::Literal;
  t.value_ = std::move(lexical);
  t.datatype_ = std::string(vocab::kRdfLangString);
  for (auto& c : language) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  t.language_ = std::move(language);
  return t;
}

Term Term::boolean(bool value) {
  return literal(value ? "true" : "false", std::string(vocab::kXsdBoolean));
}

Term Term::integer(std::int64_t value, std::string_view datatype) {
  return literal(std::to_string(value), std::string(datatype));
}

std::string escapeLiteral(std::string_view lexical) {
  std::string out;
  out.reserve(lexical.size() + 2);
  for (char c : lexical) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Term::toNTriples() const {
  switch (kind_) {
    case TermKind::Iri: return "<" + value_ + ">";
    case TermKind::Blank: return "_:" + value_;
    case TermKind::Literal: {
      std::string out = "\"" + escapeLiteral(value_) + "\"";
      if (!language_.empty()) return out + "@" + language_;
      if (datatype_ != vocab::kXsdString) out += "^^<" + datatype_ + ">";
      return out;
    }
  }
  return {};
}

Term mkContainerMembership(std::int64_t n) {
  if (n < 1) {
    throw Error(ErrorKind::InvalidIndex,
                "container membership index must be >= 1, got " + std::to_string(n));
  }
  return Term::iri(std::string(vocab::kRdf) + "_" + std::to_string(n));
}

std::optional<std::int64_t> membershipIndex(std::string_view iri) {
  if (!iri.starts_with(vocab::kRdf)) return std::nullopt;
  auto local = iri.substr(vocab::kRdf.size());
  if (local.size() < 2 || local[0] != '_') return std::nullopt;
  auto digits = local.substr(1);
  // No leading zeros: rdf:_01 is not a membership property.
  if (digits[0] == '0') return std::nullopt;
  std::int64_t n = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || n < 1) return std::nullopt;
  return n;
}

std::optional<std::int64_t> membershipIndex(const Term& p) {
  if (!p.isIri()) return std::nullopt;
  return membershipIndex(p.value());
}

std::size_t TermHash::operator()(const Term& t) const noexcept {
  std::size_t h = std::hash<std::string>{}(t.value());
  h ^= static_cast<std::size_t>(t.kind()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  if (t.isLiteral()) {
    h ^= std::hash<std::string>{}(t.datatype()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::string>{}(t.language()) + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace facadex::rdf
