#include "facadex/query/parser.hpp"

#include <cctype>
#include <cstring>
#include <set>

#include "facadex/error.hpp"
#include "facadex/util/text.hpp"

namespace facadex::query {
namespace {

struct Token {
  enum class Kind { IriRef, PName, BNode, Var, String, LangTag, Integer, Decimal, Double, Punct, Word, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

[[noreturn]] void syntaxError(std::size_t line, std::size_t col, const std::string& msg) {
  throw Error(ErrorKind::Syntax, std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
}

bool isPnChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         static_cast<unsigned char>(c) >= 0x80;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skipSpaceAndComments();
      Token t;
      t.line = line_;
      t.col = pos_ - lineStart_ + 1;
      if (pos_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      lexOne(t);
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    syntaxError(line_, pos_ - lineStart_ + 1, msg);
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        lineStart_ = pos_ + 1;
      }
      ++pos_;
    }
  }

  void skipSpaceAndComments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  // An IRIREF when the text up to the next '>' has no forbidden characters,
  // otherwise the '<' is an operator.
  bool tryIriRef(Token& t) {
    std::size_t i = pos_ + 1;
    while (i < text_.size()) {
      char c = text_[i];
      if (c == '>') break;
      if (std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '"' || c == '{' ||
          c == '}' || c == '|' || c == '^' || c == '`' || c == '\\')
        return false;
      ++i;
    }
    if (i >= text_.size()) return false;
    t.kind = Token::Kind::IriRef;
    t.text = std::string(text_.substr(pos_ + 1, i - pos_ - 1));
    advance(i - pos_ + 1);
    return true;
  }

  void lexString(Token& t) {
    char q = peek();
    bool longForm = peek(1) == q && peek(2) == q;
    advance(longForm ? 3 : 1);
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated string literal");
      char c = peek();
      if (longForm && c == q && peek(1) == q && peek(2) == q) {
        advance(3);
        break;
      }
      if (!longForm && c == q) {
        advance();
        break;
      }
      if (!longForm && (c == '\n' || c == '\r')) fail("line break in string literal");
      if (c == '\\') {
        char e = peek(1);
        advance(2);
        switch (e) {
          case 't': out += '\t'; break;
          case 'n': out += '\n'; break;
          case 'r': out += '\r'; break;
          case 'b': out += '\b'; break;
          case 'f': out += '\f'; break;
          case '"': out += '"'; break;
          case '\'': out += '\''; break;
          case '\\': out += '\\'; break;
          case 'u':
          case 'U': {
            std::size_t n = e == 'u' ? 4 : 8;
            std::uint32_t cp = 0;
            for (std::size_t i = 0; i < n; ++i) {
              char h = peek();
              if (!std::isxdigit(static_cast<unsigned char>(h))) fail("bad \\u escape");
              cp = cp * 16 + static_cast<std::uint32_t>(
                                 std::isdigit(static_cast<unsigned char>(h)) ? h - '0'
                                                                             : std::tolower(h) - 'a' + 10);
              advance();
            }
            out += util::encodeUtf8(cp);
            break;
          }
          default: fail(std::string("unknown escape \\") + e);
        }
        continue;
      }
      out += c;
      advance();
    }
    t.kind = Token::Kind::String;
    t.text = std::move(out);
  }

  void lexNumber(Token& t) {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    t.kind = Token::Kind::Integer;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      t.kind = Token::Kind::Decimal;
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t save = pos_;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        t.kind = Token::Kind::Double;
      } else {
        pos_ = save;
      }
    }
    t.text = std::string(text_.substr(start, pos_ - start));
  }

  // Local part of a prefixed name: PN chars, '.', '%XX', and '\' escapes;
  // never ends with '.'.
  std::string lexLocal() {
    std::string out;
    while (pos_ < text_.size()) {
      char c = peek();
      if (isPnChar(c) || c == ':') {
        out += c;
        advance();
      } else if (c == '.' && (isPnChar(peek(1)) || peek(1) == ':' || peek(1) == '%')) {
        out += c;
        advance();
      } else if (c == '%' && std::isxdigit(static_cast<unsigned char>(peek(1))) &&
                 std::isxdigit(static_cast<unsigned char>(peek(2)))) {
        out += std::string(text_.substr(pos_, 3));
        advance(3);
      } else if (c == '\\' && peek(1) != '\0' && std::strchr("_~.-!$&'()*+,;=/?#@%", peek(1))) {
        out += peek(1);
        advance(2);
      } else {
        break;
      }
    }
    return out;
  }

  void lexOne(Token& t) {
    char c = peek();
    if (c == '<') {
      if (tryIriRef(t)) return;
      t.kind = Token::Kind::Punct;
      if (peek(1) == '=') {
        t.text = "<=";
        advance(2);
      } else {
        t.text = "<";
        advance();
      }
      return;
    }
    if (c == '"' || c == '\'') return lexString(t);
    if (c == '?' || c == '$') {
      advance();
      std::size_t start = pos_;
      while (isPnChar(peek()) && peek() != '-') advance();
      if (start == pos_) fail("empty variable name");
      t.kind = Token::Kind::Var;
      t.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    if (c == '@') {
      advance();
      std::size_t start = pos_;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-') advance();
      t.kind = Token::Kind::LangTag;
      t.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    if (c == '_' && peek(1) == ':') {
      advance(2);
      std::size_t start = pos_;
      while (isPnChar(peek()) || (peek() == '.' && isPnChar(peek(1)))) advance();
      if (start == pos_) fail("empty blank node label");
      t.kind = Token::Kind::BNode;
      t.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      if (c == '.') {
        std::size_t start = pos_;
        advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        t.kind = Token::Kind::Decimal;
        t.text = "0" + std::string(text_.substr(start, pos_ - start));
        return;
      }
      return lexNumber(t);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == ':' || static_cast<unsigned char>(c) >= 0x80) {
      std::size_t start = pos_;
      while (isPnChar(peek()) || (peek() == '.' && isPnChar(peek(1)))) advance();
      if (peek() == ':') {
        std::string prefix(text_.substr(start, pos_ - start));
        advance();
        t.kind = Token::Kind::PName;
        t.text = prefix + ":" + lexLocal();
        return;
      }
      t.kind = Token::Kind::Word;
      t.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    static const std::vector<std::string_view> kPuncts{"&&", "||", "!=", ">=", "^^", "{", "}", "(",
                                                       ")", "[", "]", ".", ",", ";", "*", "=", ">",
                                                       "!", "+", "-", "/", "|", "^"};
    for (auto p : kPuncts) {
      if (text_.compare(pos_, p.size(), p) == 0) {
        t.kind = Token::Kind::Punct;
        t.text = std::string(p);
        advance(p.size());
        return;
      }
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t lineStart_ = 0;
};

const std::set<std::string> kBuiltins{
    "STR",      "LANG",     "LANGMATCHES", "DATATYPE", "BOUND",     "IRI",      "URI",
    "BNODE",    "RAND",     "ABS",         "CEIL",     "FLOOR",     "ROUND",    "CONCAT",
    "STRLEN",   "UCASE",    "LCASE",       "ENCODE_FOR_URI",        "CONTAINS", "STRSTARTS",
    "STRENDS",  "STRBEFORE", "STRAFTER",   "YEAR",     "MONTH",     "DAY",      "HOURS",
    "MINUTES",  "SECONDS",  "NOW",         "MD5",      "SHA1",      "SHA256",   "SHA512",
    "COALESCE", "IF",       "STRLANG",     "STRDT",    "SAMETERM",  "ISIRI",    "ISURI",
    "ISBLANK",  "ISLITERAL", "ISNUMERIC",  "REGEX",    "SUBSTR",    "REPLACE"};

const std::set<std::string> kAggregates{"COUNT", "SUM", "MIN", "MAX", "AVG", "SAMPLE", "GROUP_CONCAT"};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

  Query run() {
    prologue();
    if (isWord("SELECT")) {
      selectQuery();
    } else if (isWord("CONSTRUCT")) {
      constructQuery();
    } else if (isWord("ASK")) {
      advance();
      query_.form = QueryForm::Ask;
      datasetClause();
      whereClause();
      solutionModifiers();
    } else if (isWord("DESCRIBE")) {
      fail("DESCRIBE queries are not supported");
    } else if (isWordIn({"INSERT", "DELETE", "LOAD", "CLEAR", "CREATE", "DROP", "WITH"})) {
      fail("SPARQL Update is not supported");
    } else {
      fail("expected SELECT, CONSTRUCT or ASK");
    }
    if (isWord("VALUES")) {
      advance();
      query_.where.elements.push_back(Pattern{values()});
    }
    if (peek().kind != Token::Kind::End) fail("unexpected '" + peek().text + "' after query");
    return std::move(query_);
  }

 private:
  // ---------------------------------------------------------------- tokens

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& advance() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    syntaxError(t.line, t.col, msg);
  }

  bool isPunct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == Token::Kind::Punct && peek(ahead).text == p;
  }
  bool isWord(std::string_view w, std::size_t ahead = 0) const {
    return peek(ahead).kind == Token::Kind::Word && util::iequals(peek(ahead).text, w);
  }
  bool isWordIn(std::initializer_list<std::string_view> words) const {
    for (auto w : words) {
      if (isWord(w)) return true;
    }
    return false;
  }
  void expectPunct(std::string_view p) {
    if (!isPunct(p)) fail("expected '" + std::string(p) + "' but found '" + describe(peek()) + "'");
    advance();
  }
  void expectWord(std::string_view w) {
    if (!isWord(w)) fail("expected " + std::string(w) + " but found '" + describe(peek()) + "'");
    advance();
  }
  static std::string describe(const Token& t) {
    return t.kind == Token::Kind::End ? "end of input" : t.text;
  }

  // ---------------------------------------------------------------- terms

  std::string resolveIri(const std::string& iri) const {
    if (rdf::hasScheme(iri) || base_.empty()) return iri;
    return util::resolveIri(base_, iri);
  }

  rdf::Term makeIri(const std::string& iri) {
    if (!rdf::hasScheme(iri)) fail("relative IRI <" + iri + "> without BASE");
    return rdf::Term::iri(iri);
  }

  std::string expandPName(const std::string& pname) {
    auto colon = pname.find(':');
    auto prefix = pname.substr(0, colon);
    auto it = query_.prefixes.find(prefix);
    if (it == query_.prefixes.end()) fail("undefined prefix '" + prefix + ":'");
    return it->second + pname.substr(colon + 1);
  }

  bool atIri() const {
    return peek().kind == Token::Kind::IriRef || peek().kind == Token::Kind::PName;
  }

  rdf::Term iri() {
    const auto& t = peek();
    if (t.kind == Token::Kind::IriRef) {
      auto value = resolveIri(t.text);
      advance();
      return makeIri(value);
    }
    if (t.kind == Token::Kind::PName) {
      auto value = expandPName(t.text);
      advance();
      return makeIri(value);
    }
    fail("expected IRI but found '" + describe(t) + "'");
  }

  bool atLiteral() const {
    auto k = peek().kind;
    return k == Token::Kind::String || k == Token::Kind::Integer || k == Token::Kind::Decimal ||
           k == Token::Kind::Double || isWord("true") || isWord("false") ||
           ((isPunct("-") || isPunct("+")) &&
            (peek(1).kind == Token::Kind::Integer || peek(1).kind == Token::Kind::Decimal ||
             peek(1).kind == Token::Kind::Double));
  }

  rdf::Term literal() {
    std::string sign;
    if (isPunct("-") || isPunct("+")) sign = advance().text == "-" ? "-" : "+";
    const auto& t = peek();
    switch (t.kind) {
      case Token::Kind::Integer: {
        auto text = sign + t.text;
        advance();
        return rdf::Term::literal(text, std::string(vocab::kXsdInteger));
      }
      case Token::Kind::Decimal: {
        auto text = sign + t.text;
        advance();
        return rdf::Term::literal(text, std::string(vocab::kXsdDecimal));
      }
      case Token::Kind::Double: {
        auto text = sign + t.text;
        advance();
        return rdf::Term::literal(text, std::string(vocab::kXsdDouble));
      }
      case Token::Kind::String: {
        auto lexical = t.text;
        advance();
        if (peek().kind == Token::Kind::LangTag) {
          auto lang = advance().text;
          return rdf::Term::langLiteral(lexical, lang);
        }
        if (isPunct("^^")) {
          advance();
          return rdf::Term::literal(lexical, iri().value());
        }
        return rdf::Term::literal(lexical);
      }
      default: break;
    }
    if (isWord("true") || isWord("false")) {
      bool v = util::iequals(advance().text, "true");
      return rdf::Term::boolean(v);
    }
    fail("expected literal but found '" + describe(t) + "'");
  }

  // ---------------------------------------------------------------- prologue

  void prologue() {
    while (true) {
      if (isWord("PREFIX")) {
        advance();
        if (peek().kind != Token::Kind::PName || peek().text.back() != ':' ||
            peek().text.find(':') != peek().text.size() - 1)
          fail("expected prefix name after PREFIX");
        auto name = peek().text.substr(0, peek().text.size() - 1);
        advance();
        if (peek().kind != Token::Kind::IriRef) fail("expected IRI after PREFIX " + name + ":");
        query_.prefixes[name] = resolveIri(advance().text);
      } else if (isWord("BASE")) {
        advance();
        if (peek().kind != Token::Kind::IriRef) fail("expected IRI after BASE");
        base_ = resolveIri(advance().text);
      } else {
        return;
      }
    }
  }

  void datasetClause() {
    if (isWord("FROM")) fail("FROM clauses are not supported");
  }

  // ---------------------------------------------------------------- query forms

  void selectQuery() {
    advance();
    query_.form = QueryForm::Select;
    if (isWord("DISTINCT") || isWord("REDUCED")) {
      advance();
      query_.distinct = true;
    }
    if (isPunct("*")) {
      advance();
      query_.selectAll = true;
    } else {
      while (peek().kind == Token::Kind::Var || isPunct("(")) {
        if (peek().kind == Token::Kind::Var) {
          query_.projection.push_back({Var{advance().text}, std::nullopt});
          continue;
        }
        advance();
        auto e = expression();
        expectWord("AS");
        if (peek().kind != Token::Kind::Var) fail("expected variable after AS");
        auto v = Var{advance().text};
        expectPunct(")");
        query_.projection.push_back({v, std::move(e)});
      }
      if (query_.projection.empty()) fail("expected '*' or variables after SELECT");
    }
    datasetClause();
    whereClause();
    solutionModifiers();
  }

  void constructQuery() {
    advance();
    query_.form = QueryForm::Construct;
    datasetClause();
    if (isWord("WHERE")) {
      // CONSTRUCT WHERE { triples }: the pattern is also the template.
      advance();
      expectPunct("{");
      Bgp bgp;
      while (!isPunct("}")) {
        triplesSameSubject(bgp.triples);
        if (isPunct(".")) advance();
      }
      advance();
      for (const auto& t : bgp.triples) {
        for (const auto* pt : {&t.subject, &t.predicate, &t.object}) {
          if (isVar(*pt) && asVar(*pt).isAnonymous()) fail("blank nodes are not allowed in CONSTRUCT WHERE");
        }
      }
      query_.constructTemplate = bgp.triples;
      query_.where.elements.push_back(Pattern{std::move(bgp)});
      solutionModifiers();
      return;
    }
    expectPunct("{");
    inTemplate_ = true;
    while (!isPunct("}")) {
      triplesSameSubject(query_.constructTemplate);
      if (isPunct(".")) advance();
      else if (!isPunct("}")) fail("expected '.' or '}' in CONSTRUCT template");
    }
    inTemplate_ = false;
    advance();
    datasetClause();
    whereClause();
    solutionModifiers();
  }

  void whereClause() {
    if (isWord("WHERE")) advance();
    query_.where = group();
  }

  void solutionModifiers() {
    if (isWord("GROUP")) fail("GROUP BY is not supported");
    if (isWord("HAVING")) fail("HAVING is not supported");
    if (isWord("ORDER")) {
      advance();
      expectWord("BY");
      while (true) {
        OrderKey key;
        if (isWord("ASC") || isWord("DESC")) {
          key.descending = util::iequals(advance().text, "DESC");
          expectPunct("(");
          key.expr = expression();
          expectPunct(")");
        } else if (peek().kind == Token::Kind::Var) {
          key.expr = Expr::makeVariable(advance().text);
        } else if (isPunct("(") || isBuiltinCall() || atIri()) {
          key.expr = constraint();
        } else {
          break;
        }
        query_.orderBy.push_back(std::move(key));
      }
      if (query_.orderBy.empty()) fail("expected ORDER BY condition");
    }
    for (int i = 0; i < 2; ++i) {
      if (isWord("LIMIT")) {
        advance();
        if (peek().kind != Token::Kind::Integer) fail("expected integer after LIMIT");
        query_.limit = std::stoull(advance().text);
      } else if (isWord("OFFSET")) {
        advance();
        if (peek().kind != Token::Kind::Integer) fail("expected integer after OFFSET");
        query_.offset = std::stoull(advance().text);
      }
    }
  }

  // ---------------------------------------------------------------- patterns

  std::shared_ptr<const Group> sharedGroup() { return std::make_shared<const Group>(group()); }

  Group group() {
    expectPunct("{");
    if (isWord("SELECT")) fail("subqueries (nested SELECT) are not supported");
    Group g;
    while (!isPunct("}")) {
      if (peek().kind == Token::Kind::End) fail("unterminated group pattern");
      if (isPunct(".")) {
        advance();
      } else if (isWord("OPTIONAL")) {
        advance();
        g.elements.push_back(Pattern{OptionalPattern{sharedGroup()}});
      } else if (isWord("MINUS")) {
        advance();
        g.elements.push_back(Pattern{MinusPattern{sharedGroup()}});
      } else if (isPunct("{")) {
        std::vector<std::shared_ptr<const Group>> branches{sharedGroup()};
        while (isWord("UNION")) {
          advance();
          branches.push_back(sharedGroup());
        }
        if (branches.size() == 1) {
          g.elements.push_back(Pattern{Group(*branches[0])});
        } else {
          g.elements.push_back(Pattern{UnionPattern{std::move(branches)}});
        }
      } else if (isWord("FILTER")) {
        advance();
        if (isWord("EXISTS") || isWord("NOT")) fail("EXISTS is not supported");
        g.filters.push_back(constraint());
      } else if (isWord("BIND")) {
        advance();
        expectPunct("(");
        auto e = expression();
        expectWord("AS");
        if (peek().kind != Token::Kind::Var) fail("expected variable after AS");
        Var v{advance().text};
        expectPunct(")");
        g.elements.push_back(Pattern{Bind{std::move(e), std::move(v)}});
      } else if (isWord("VALUES")) {
        advance();
        g.elements.push_back(Pattern{values()});
      } else if (isWord("SERVICE")) {
        advance();
        Service s;
        if (isWord("SILENT")) {
          advance();
          s.silent = true;
        }
        if (peek().kind == Token::Kind::Var) {
          s.target = Var{advance().text};
        } else {
          s.target = iri();
        }
        s.inner = sharedGroup();
        g.elements.push_back(Pattern{std::move(s)});
      } else if (isWord("GRAPH")) {
        fail("GRAPH patterns are not supported");
      } else {
        if (g.elements.empty() || !std::holds_alternative<Bgp>(g.elements.back().node)) {
          g.elements.push_back(Pattern{Bgp{}});
        }
        triplesSameSubject(std::get<Bgp>(g.elements.back().node).triples);
        if (!isPunct(".") && !isPunct("}") && !startsPatternKeyword()) {
          fail("expected '.' or '}' but found '" + describe(peek()) + "'");
        }
      }
    }
    advance();
    return g;
  }

  bool startsPatternKeyword() const {
    return isPunct("{") ||
           isWordIn({"OPTIONAL", "MINUS", "FILTER", "BIND", "VALUES", "SERVICE", "GRAPH"});
  }

  Values values() {
    Values v;
    bool multi = isPunct("(");
    if (multi) {
      advance();
      while (peek().kind == Token::Kind::Var) v.vars.push_back(Var{advance().text});
      expectPunct(")");
    } else {
      if (peek().kind != Token::Kind::Var) fail("expected variable after VALUES");
      v.vars.push_back(Var{advance().text});
    }
    expectPunct("{");
    while (!isPunct("}")) {
      std::vector<std::optional<rdf::Term>> row;
      if (multi) {
        expectPunct("(");
        while (!isPunct(")")) row.push_back(dataValue());
        advance();
        if (row.size() != v.vars.size()) fail("VALUES row has the wrong number of values");
      } else {
        row.push_back(dataValue());
      }
      v.rows.push_back(std::move(row));
    }
    advance();
    return v;
  }

  std::optional<rdf::Term> dataValue() {
    if (isWord("UNDEF")) {
      advance();
      return std::nullopt;
    }
    if (atIri()) return iri();
    if (atLiteral()) return literal();
    fail("expected a value in VALUES but found '" + describe(peek()) + "'");
  }

  PatternTerm freshBlank() {
    auto n = std::to_string(++anonCounter_);
    if (inTemplate_) return rdf::Term::blank("anon" + n);
    return Var{".anon" + n};
  }

  PatternTerm varOrTerm() {
    const auto& t = peek();
    if (t.kind == Token::Kind::Var) return Var{advance().text};
    if (t.kind == Token::Kind::BNode) {
      auto label = advance().text;
      if (inTemplate_) return rdf::Term::blank("b" + label);
      return Var{".b" + label};
    }
    if (atIri()) return iri();
    if (atLiteral()) return literal();
    if (isPunct("(")) fail("RDF collections are not supported");
    fail("expected a term but found '" + describe(t) + "'");
  }

  PatternTerm verb() {
    if (isWord("a")) {
      advance();
      return rdf::Term::iri(std::string(vocab::kRdfType));
    }
    if (peek().kind == Token::Kind::Var) return Var{advance().text};
    if (atIri()) return iri();
    fail("expected predicate but found '" + describe(peek()) + "'");
  }

  void triplesSameSubject(std::vector<TriplePattern>& out) {
    if (isPunct("[")) {
      advance();
      auto subject = freshBlank();
      if (isPunct("]")) {
        advance();
        propertyList(subject, out, true);
      } else {
        propertyList(subject, out, true);
        expectPunct("]");
        propertyList(subject, out, false);
      }
      return;
    }
    auto subject = varOrTerm();
    if (std::holds_alternative<rdf::Term>(subject) && std::get<rdf::Term>(subject).isLiteral()) {
      fail("literal in subject position");
    }
    propertyList(subject, out, true);
  }

  void propertyList(const PatternTerm& subject, std::vector<TriplePattern>& out, bool required) {
    if (!required && (isPunct(".") || isPunct("}") || isPunct("]") || startsPatternKeyword())) return;
    while (true) {
      auto p = verb();
      if (isPunct("/") || isPunct("|") || isPunct("^") || isPunct("*") || isPunct("+"))
        fail("property paths are not supported");
      while (true) {
        auto o = object(out);
        out.push_back(TriplePattern{subject, p, std::move(o)});
        if (!isPunct(",")) break;
        advance();
      }
      if (!isPunct(";")) return;
      while (isPunct(";")) advance();
      if (isPunct(".") || isPunct("]") || isPunct("}")) return;
    }
  }

  PatternTerm object(std::vector<TriplePattern>& out) {
    if (isPunct("[")) {
      advance();
      auto node = freshBlank();
      if (!isPunct("]")) propertyList(node, out, true);
      expectPunct("]");
      return node;
    }
    return varOrTerm();
  }

  // ---------------------------------------------------------------- expressions

  bool isBuiltinCall() const {
    return peek().kind == Token::Kind::Word && isPunct("(", 1) &&
           kBuiltins.contains(util::toUpper(peek().text));
  }

  // FILTER / ORDER BY constraint: bracketted expression or function call.
  Expr constraint() {
    if (isPunct("(")) {
      advance();
      auto e = expression();
      expectPunct(")");
      return e;
    }
    return primary();
  }

  Expr expression() { return orExpr(); }

  Expr orExpr() {
    auto e = andExpr();
    while (isPunct("||")) {
      advance();
      e = Expr::makeCall("||", {std::move(e), andExpr()});
    }
    return e;
  }

  Expr andExpr() {
    auto e = relational();
    while (isPunct("&&")) {
      advance();
      e = Expr::makeCall("&&", {std::move(e), relational()});
    }
    return e;
  }

  Expr relational() {
    auto e = additive();
    for (std::string_view op : {"=", "!=", "<", ">", "<=", ">="}) {
      if (isPunct(op)) {
        advance();
        return Expr::makeCall(std::string(op), {std::move(e), additive()});
      }
    }
    bool negated = isWord("NOT") && isWord("IN", 1);
    if (negated || isWord("IN")) {
      advance();
      if (negated) advance();
      std::vector<Expr> args{std::move(e)};
      auto list = argList();
      args.insert(args.end(), std::make_move_iterator(list.begin()), std::make_move_iterator(list.end()));
      return Expr::makeCall(negated ? "NOT IN" : "IN", std::move(args));
    }
    return e;
  }

  Expr additive() {
    auto e = multiplicative();
    while (isPunct("+") || isPunct("-")) {
      auto op = advance().text;
      e = Expr::makeCall(op, {std::move(e), multiplicative()});
    }
    return e;
  }

  Expr multiplicative() {
    auto e = unary();
    while (isPunct("*") || isPunct("/")) {
      auto op = advance().text;
      e = Expr::makeCall(op, {std::move(e), unary()});
    }
    return e;
  }

  Expr unary() {
    if (isPunct("!")) {
      advance();
      return Expr::makeCall("!", {unary()});
    }
    if (isPunct("-")) {
      advance();
      return Expr::makeCall("NEG", {unary()});
    }
    if (isPunct("+")) {
      advance();
      return Expr::makeCall("UPLUS", {unary()});
    }
    return primary();
  }

  std::vector<Expr> argList() {
    expectPunct("(");
    std::vector<Expr> args;
    if (isWord("DISTINCT")) fail("DISTINCT in function calls is not supported");
    if (isPunct(")")) {
      advance();
      return args;
    }
    while (true) {
      args.push_back(expression());
      if (isPunct(")")) break;
      expectPunct(",");
    }
    advance();
    return args;
  }

  Expr primary() {
    const auto& t = peek();
    if (isPunct("(")) {
      advance();
      auto e = expression();
      expectPunct(")");
      return e;
    }
    if (t.kind == Token::Kind::Var) return Expr::makeVariable(advance().text);
    if (t.kind == Token::Kind::Word) {
      auto upper = util::toUpper(t.text);
      if (kAggregates.contains(upper)) fail("aggregate " + upper + " is not supported");
      if (upper == "EXISTS" || upper == "NOT") fail("EXISTS is not supported");
      if (kBuiltins.contains(upper)) {
        advance();
        if (upper == "URI") upper = "IRI";
        if (upper == "ISURI") upper = "ISIRI";
        return Expr::makeCall(upper, argList());
      }
      if (upper == "TRUE" || upper == "FALSE") return Expr::makeConstant(literal());
      fail("unknown function or keyword '" + t.text + "'");
    }
    if (atIri()) {
      auto name = iri();
      if (isPunct("(")) return Expr::makeCall(name.value(), argList());
      return Expr::makeConstant(std::move(name));
    }
    if (atLiteral()) return Expr::makeConstant(literal());
    if (t.kind == Token::Kind::BNode) fail("blank nodes are not allowed in expressions");
    fail("expected expression but found '" + describe(t) + "'");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Query query_;
  std::string base_;
  bool inTemplate_ = false;
  std::size_t anonCounter_ = 0;
};

}  // namespace

Query parseQuery(std::string_view text) { return Parser(text).run(); }

}  // namespace facadex::query
