#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "facadex/error.hpp"
#include "facadex/rdf/io.hpp"
#include "facadex/util/text.hpp"

namespace facadex::rdf {
namespace {

// Recursive-descent reader for N-Triples, N-Quads and the Turtle subset:
// prefixes, base, predicate-object lists, object lists, blank-node property
// lists, numeric/boolean/string literals. Collections are rejected.
class Reader {
 public:
  Reader(std::string_view text, RdfFormat format, std::string_view base)
      : text_(text), format_(format), base_(base) {}

  Dataset run() {
    skipWs();
    while (!atEnd()) {
      if (format_ == RdfFormat::Turtle && directive()) {
        skipWs();
        continue;
      }
      statement();
      skipWs();
    }
    return std::move(dataset_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::Syntax,
                std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }

  bool atEnd() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void skipWs() {
    while (!atEnd()) {
      char c = peek();
      if (c == '#') {
        while (!atEnd() && peek() != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skipWs();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool matchKeyword(std::string_view kw, bool caseInsensitive) {
    if (pos_ + kw.size() > text_.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i) {
      char a = text_[pos_ + i];
      char b = kw[i];
      if (caseInsensitive ? std::tolower(static_cast<unsigned char>(a)) != b : a != b)
        return false;
    }
    char after = peek(kw.size());
    if (std::isalnum(static_cast<unsigned char>(after))) return false;
    pos_ += kw.size();
    return true;
  }

  bool directive() {
    bool sparqlStyle = false;
    if (matchKeyword("@prefix", false)) {
    } else if (matchKeyword("prefix", true)) {
      sparqlStyle = true;
    } else if (matchKeyword("@base", false)) {
      skipWs();
      base_ = iriRef();
      expect('.');
      return true;
    } else if (matchKeyword("base", true)) {
      skipWs();
      base_ = iriRef();
      return true;
    } else {
      return false;
    }
    skipWs();
    std::size_t start = pos_;
    while (!atEnd() && peek() != ':') {
      char c = peek();
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
        fail("invalid prefix name");
      ++pos_;
    }
    std::string name(text_.substr(start, pos_ - start));
    expect(':');
    skipWs();
    prefixes_[name] = iriRef();
    if (!sparqlStyle) expect('.');
    return true;
  }

  void statement() {
    if (format_ == RdfFormat::Turtle) {
      skipWs();
      Term s;
      bool bracketSubject = peek() == '[';
      s = subject();
      skipWs();
      if (bracketSubject && peek() == '.') {
        ++pos_;
        return;
      }
      predicateObjectList(s);
      expect('.');
      return;
    }
    Term s = subject();
    skipWs();
    Term p = predicateTerm();
    skipWs();
    Term o = object();
    skipWs();
    Graph* target = &dataset_.defaultGraph;
    if (format_ == RdfFormat::NQuads && peek() != '.') {
      Term g = (peek() == '_') ? blankLabel() : Term::iri(resolve(iriRef()));
      target = &dataset_.named[g.isBlank() ? "_:" + g.value() : g.value()];
    }
    expect('.');
    target->insert(std::move(s), std::move(p), std::move(o));
  }

  void predicateObjectList(const Term& s) {
    while (true) {
      skipWs();
      Term p = predicateTerm();
      while (true) {
        skipWs();
        Term o = object();
        dataset_.defaultGraph.insert(s, p, std::move(o));
        skipWs();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        break;
      }
      skipWs();
      if (peek() != ';') return;
      while (peek() == ';') {
        ++pos_;
        skipWs();
      }
      // Trailing ';' before '.' or ']' is allowed.
      if (peek() == '.' || peek() == ']') return;
    }
  }

  Term subject() {
    skipWs();
    char c = peek();
    if (c == '<') return Term::iri(resolve(iriRef()));
    if (c == '_') return blankLabel();
    if (format_ == RdfFormat::Turtle) {
      if (c == '[') return blankPropertyList();
      if (c == '(') fail("collections are not supported");
      return prefixedName();
    }
    fail("expected subject");
  }

  Term predicateTerm() {
    skipWs();
    if (peek() == '<') return Term::iri(resolve(iriRef()));
    if (format_ == RdfFormat::Turtle) {
      if (peek() == 'a' && !isNameChar(peek(1)) && peek(1) != ':') {
        ++pos_;
        return Term::iri(std::string(vocab::kRdfType));
      }
      return prefixedName();
    }
    fail("expected predicate IRI");
  }

  Term object() {
    skipWs();
    char c = peek();
    if (c == '<') return Term::iri(resolve(iriRef()));
    if (c == '_') return blankLabel();
    if (c == '"' || c == '\'') return literal();
    if (format_ == RdfFormat::Turtle) {
      if (c == '[') return blankPropertyList();
      if (c == '(') fail("collections are not supported");
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.')
        return number();
      if (matchKeyword("true", false)) return Term::boolean(true);
      if (matchKeyword("false", false)) return Term::boolean(false);
      return prefixedName();
    }
    fail("expected object");
  }

  Term blankPropertyList() {
    expect('[');
    Term node = Term::blank("anon" + std::to_string(anonCounter_++));
    skipWs();
    if (peek() == ']') {
      ++pos_;
      return node;
    }
    predicateObjectList(node);
    expect(']');
    return node;
  }

  static bool isNameChar(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           static_cast<unsigned char>(c) >= 0x80;
  }

  Term blankLabel() {
    if (peek() != '_' || peek(1) != ':') fail("expected blank node label");
    pos_ += 2;
    std::size_t start = pos_;
    while (!atEnd() && (isNameChar(peek()) || (peek() == '.' && isNameChar(peek(1))))) ++pos_;
    if (start == pos_) fail("empty blank node label");
    // Prefix user labels so they cannot collide with generated [] nodes.
    return Term::blank("b" + std::string(text_.substr(start, pos_ - start)));
  }

  std::string iriRef() {
    skipWs();
    if (peek() != '<') fail("expected '<'");
    ++pos_;
    std::string out;
    while (true) {
      if (atEnd()) fail("unterminated IRI");
      char c = text_[pos_++];
      if (c == '>') break;
      if (c == '\\') {
        char e = atEnd() ? '\0' : text_[pos_++];
        if (e == 'u') {
          out += unicodeEscape(4);
        } else if (e == 'U') {
          out += unicodeEscape(8);
        } else {
          fail("invalid escape in IRI");
        }
        continue;
      }
      if (c == ' ' || c == '\n' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
          c == '`')
        fail("invalid character in IRI");
      out += c;
    }
    return out;
  }

  std::string resolve(std::string iri) {
    if (hasScheme(iri)) return iri;
    if (base_.empty()) fail("relative IRI <" + iri + "> without base");
    return util::resolveIri(base_, iri);
  }

  Term prefixedName() {
    std::size_t start = pos_;
    while (!atEnd() && peek() != ':' && (isNameChar(peek()) || peek() == '.')) ++pos_;
    if (peek() != ':') {
      pos_ = start;
      fail("expected prefixed name");
    }
    std::string prefix(text_.substr(start, pos_ - start));
    ++pos_;
    std::string local;
    while (!atEnd()) {
      char c = peek();
      if (isNameChar(c) || c == ':') {
        local += c;
        ++pos_;
      } else if (c == '.' && (isNameChar(peek(1)) || peek(1) == ':')) {
        local += c;
        ++pos_;
      } else if (c == '%' && std::isxdigit(static_cast<unsigned char>(peek(1))) &&
                 std::isxdigit(static_cast<unsigned char>(peek(2)))) {
        local += text_.substr(pos_, 3);
        pos_ += 3;
      } else if (c == '\\' && pos_ + 1 < text_.size()) {
        local += peek(1);
        pos_ += 2;
      } else {
        break;
      }
    }
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) fail("undeclared prefix '" + prefix + "'");
    return Term::iri(it->second + local);
  }

  std::string unicodeEscape(int digits) {
    if (pos_ + digits > text_.size()) fail("truncated unicode escape");
    std::uint32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      char h = text_[pos_++];
      if (!std::isxdigit(static_cast<unsigned char>(h))) fail("invalid unicode escape");
      cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(static_cast<unsigned char>(h))
                                                    ? h - '0'
                                                    : std::tolower(h) - 'a' + 10);
    }
    return util::encodeUtf8(cp);
  }

  Term literal() {
    char quote = peek();
    bool longForm = peek(1) == quote && peek(2) == quote;
    if (longForm && format_ != RdfFormat::Turtle) fail("long string in N-Triples");
    pos_ += longForm ? 3 : 1;
    std::string lex;
    while (true) {
      if (atEnd()) fail("unterminated string literal");
      char c = peek();
      if (longForm) {
        if (c == quote && peek(1) == quote && peek(2) == quote) {
          pos_ += 3;
          break;
        }
      } else if (c == quote) {
        ++pos_;
        break;
      } else if (c == '\n' || c == '\r') {
        fail("newline in string literal");
      }
      ++pos_;
      if (c != '\\') {
        lex += c;
        continue;
      }
      char e = atEnd() ? '\0' : text_[pos_++];
      switch (e) {
        case 't': lex += '\t'; break;
        case 'b': lex += '\b'; break;
        case 'n': lex += '\n'; break;
        case 'r': lex += '\r'; break;
        case 'f': lex += '\f'; break;
        case '"': lex += '"'; break;
        case '\'': lex += '\''; break;
        case '\\': lex += '\\'; break;
        case 'u': lex += unicodeEscape(4); break;
        case 'U': lex += unicodeEscape(8); break;
        default: fail("invalid escape sequence");
      }
    }
    if (peek() == '@') {
      ++pos_;
      std::size_t start = pos_;
      while (!atEnd() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-'))
        ++pos_;
      if (start == pos_) fail("empty language tag");
      return Term::langLiteral(std::move(lex), std::string(text_.substr(start, pos_ - start)));
    }
    if (peek() == '^' && peek(1) == '^') {
      pos_ += 2;
      Term dt = (peek() == '<' || format_ != RdfFormat::Turtle) ? Term::iri(resolve(iriRef()))
                                                                 : prefixedName();
      return Term::literal(std::move(lex), dt.value());
    }
    return Term::literal(std::move(lex));
  }

  Term number() {
    std::size_t start = pos_;
    if (peek() == '+' || peek() == '-') ++pos_;
    bool dot = false, exp = false;
    while (!atEnd()) {
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '.' && !dot && !exp && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        dot = true;
        ++pos_;
      } else if ((c == 'e' || c == 'E') && !exp) {
        exp = true;
        ++pos_;
        if (peek() == '+' || peek() == '-') ++pos_;
      } else {
        break;
      }
    }
    std::string lex(text_.substr(start, pos_ - start));
    if (lex.empty() || lex == "+" || lex == "-") fail("invalid number");
    auto dt = exp ? vocab::kXsdDouble : dot ? vocab::kXsdDecimal : vocab::kXsdInteger;
    return Term::literal(std::move(lex), std::string(dt));
  }

  std::string_view text_;
  RdfFormat format_;
  std::string base_;
  std::size_t pos_ = 0;
  std::size_t anonCounter_ = 0;
  std::map<std::string, std::string> prefixes_;
  Dataset dataset_;
};

}  // namespace

Dataset parseRdf(std::string_view text, RdfFormat format, std::string_view baseIri) {
  return Reader(text, format, baseIri).run();
}

Graph parseGraph(std::string_view text, RdfFormat format, std::string_view baseIri) {
  return parseRdf(text, format, baseIri).defaultGraph;
}

Dataset loadRdf(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && rdfFormatFromPath(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else if (fs::exists(path)) {
    files.push_back(path);
  } else {
    throw Error(ErrorKind::MissingFile, "no such file or directory: " + path.string());
  }
  Dataset merged;
  for (const auto& file : files) {
    auto format = rdfFormatFromPath(file);
    if (!format) {
      throw Error(ErrorKind::Config, "unrecognised RDF file extension: " + file.string());
    }
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + file.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    Dataset part;
    try {
      part = parseRdf(buffer.str(), *format, "file://" + fs::absolute(file).string());
    } catch (const Error& e) {
      throw Error(e.kind(), file.string() + ":" + e.what());
    }
    // Blank nodes are scoped per file.
    auto scope = [&](const Graph& g, Graph& into) {
      std::string tag = "f" + std::to_string(&file - files.data()) + "_";
      for (const auto& t : g) {
        auto relabel = [&](const Term& x) {
          return x.isBlank() && files.size() > 1 ? Term::blank(tag + x.value()) : x;
        };
        into.insert(relabel(t.subject), t.predicate, relabel(t.object));
      }
    };
    scope(part.defaultGraph, merged.defaultGraph);
    for (const auto& [name, g] : part.named) scope(g, merged.named[name]);
  }
  return merged;
}

}  // namespace facadex::rdf
