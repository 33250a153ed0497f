#include "markup.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

#include "facadex/error.hpp"
#include "facadex/util/text.hpp"

namespace facadex::triplify::markup {
namespace {

constexpr std::string_view kXmlNs = "http://www.w3.org/XML/1998/namespace";

bool isNameStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool isNameChar(char c) {
  return isNameStart(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.';
}

void splitQName(std::string_view qname, std::string& prefix, std::string& local) {
  auto colon = qname.find(':');
  if (colon == std::string_view::npos) {
    prefix.clear();
    local = std::string(qname);
  } else {
    prefix = std::string(qname.substr(0, colon));
    local = std::string(qname.substr(colon + 1));
  }
}

// Decodes one entity reference starting after '&'. Returns false when the
// reference is not recognised; `consumed` covers the name and ';'.
bool decodeEntity(std::string_view s, bool html, std::string& out, std::size_t& consumed) {
  auto semi = s.find(';');
  if (semi == std::string_view::npos || semi == 0 || semi > 32) return false;
  auto name = s.substr(0, semi);
  consumed = semi + 1;
  if (name[0] == '#') {
    std::uint32_t cp = 0;
    bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
    auto digits = name.substr(hex ? 2 : 1);
    if (digits.empty()) return false;
    for (char c : digits) {
      if (hex ? !std::isxdigit(static_cast<unsigned char>(c))
              : !std::isdigit(static_cast<unsigned char>(c)))
        return false;
      int v = std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : std::tolower(c) - 'a' + 10;
      cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
      if (cp > 0x10FFFF) return false;
    }
    out += util::encodeUtf8(cp);
    return true;
  }
  static const std::map<std::string_view, std::string_view> kXml{
      {"lt", "<"}, {"gt", ">"}, {"amp", "&"}, {"quot", "\""}, {"apos", "'"}};
  static const std::map<std::string_view, std::string_view> kHtml{
      {"nbsp", "\u00a0"},  {"copy", "\u00a9"},  {"reg", "\u00ae"},   {"mdash", "\u2014"},
      {"ndash", "\u2013"}, {"hellip", "\u2026"}, {"laquo", "\u00ab"}, {"raquo", "\u00bb"},
      {"euro", "\u20ac"},  {"lsquo", "\u2018"}, {"rsquo", "\u2019"}, {"ldquo", "\u201c"},
      {"rdquo", "\u201d"}, {"middot", "\u00b7"}, {"times", "\u00d7"}, {"eacute", "\u00e9"}};
  if (auto it = kXml.find(name); it != kXml.end()) {
    out += it->second;
    return true;
  }
  if (html) {
    if (auto it = kHtml.find(name); it != kHtml.end()) {
      out += it->second;
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------- XML

class XmlParser {
 public:
  explicit XmlParser(std::string_view text) : text_(text) {
    if (text_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
  }

  Node run() {
    misc(true);
    if (atEnd() || peek() != '<') fail("expected document element");
    scopes_.push_back({{"xml", std::string(kXmlNs)}});
    Node root = element();
    misc(false);
    if (!atEnd()) fail("content after document element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1 + static_cast<std::size_t>(
                               std::count(text_.begin(), text_.begin() + std::min(pos_, text_.size()), '\n'));
    throw Error(ErrorKind::Format, "XML line " + std::to_string(line) + ": " + msg);
  }

  bool atEnd() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  bool lookingAt(std::string_view s) const { return text_.compare(pos_, s.size(), s) == 0; }

  void skipSpace() {
    while (!atEnd() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  void skipPast(std::string_view terminator, const char* what) {
    auto end = text_.find(terminator, pos_);
    if (end == std::string_view::npos) fail(std::string("unterminated ") + what);
    pos_ = end + terminator.size();
  }

  void misc(bool allowDoctype) {
    while (true) {
      skipSpace();
      if (lookingAt("<?")) {
        skipPast("?>", "processing instruction");
      } else if (lookingAt("<!--")) {
        skipPast("-->", "comment");
      } else if (allowDoctype && lookingAt("<!DOCTYPE")) {
        int depth = 0;
        while (!atEnd()) {
          char c = text_[pos_++];
          if (c == '[') ++depth;
          if (c == ']') --depth;
          if (c == '>' && depth <= 0) break;
        }
      } else {
        return;
      }
    }
  }

  std::string name() {
    if (!isNameStart(peek())) fail("expected name");
    std::size_t start = pos_;
    while (!atEnd() && isNameChar(peek())) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string decodeText(std::string_view raw) {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out += raw[i];
        continue;
      }
      std::size_t consumed = 0;
      if (!decodeEntity(raw.substr(i + 1), false, out, consumed)) fail("unknown entity reference");
      i += consumed;
    }
    return out;
  }

  std::string resolvePrefix(const std::string& prefix) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (auto f = it->find(prefix); f != it->end()) return f->second;
    }
    if (prefix.empty()) return {};
    fail("undeclared namespace prefix '" + prefix + "'");
  }

  Node element() {
    ++pos_;  // '<'
    Node node;
    node.name = name();
    std::map<std::string, std::string> declared;
    std::vector<Attribute> raw;
    while (true) {
      skipSpace();
      if (peek() == '/' || peek() == '>') break;
      Attribute a;
      a.name = name();
      skipSpace();
      if (peek() != '=') fail("expected '=' after attribute " + a.name);
      ++pos_;
      skipSpace();
      char quote = peek();
      if (quote != '"' && quote != '\'') fail("attribute value must be quoted");
      ++pos_;
      auto end = text_.find(quote, pos_);
      if (end == std::string_view::npos) fail("unterminated attribute value");
      a.value = decodeText(text_.substr(pos_, end - pos_));
      pos_ = end + 1;
      for (const auto& other : raw) {
        if (other.name == a.name) fail("duplicate attribute " + a.name);
      }
      if (a.name == "xmlns") declared[""] = a.value;
      if (a.name.starts_with("xmlns:")) declared[a.name.substr(6)] = a.value;
      raw.push_back(std::move(a));
    }
    scopes_.push_back(std::move(declared));
    std::string prefix;
    splitQName(node.name, prefix, node.localName);
    node.nsUri = resolvePrefix(prefix);
    for (auto& a : raw) {
      if (a.name == "xmlns" || a.name.starts_with("xmlns:")) continue;
      std::string attrPrefix;
      splitQName(a.name, attrPrefix, a.localName);
      if (!attrPrefix.empty()) a.nsUri = resolvePrefix(attrPrefix);
      node.attributes.push_back(std::move(a));
    }

    if (peek() == '/') {
      if (peek(1) != '>') fail("expected '/>'");
      pos_ += 2;
      scopes_.pop_back();
      return node;
    }
    ++pos_;  // '>'
    content(node);
    scopes_.pop_back();
    return node;
  }

  void content(Node& node) {
    std::string text;
    auto flush = [&] {
      if (!text.empty()) {
        Node t;
        t.kind = Node::Kind::Text;
        t.text = std::move(text);
        node.children.push_back(std::move(t));
        text.clear();
      }
    };
    while (true) {
      if (atEnd()) fail("unclosed element <" + node.name + ">");
      if (lookingAt("</")) {
        pos_ += 2;
        auto closing = name();
        if (closing != node.name) {
          fail("mismatched end tag </" + closing + ">, expected </" + node.name + ">");
        }
        skipSpace();
        if (peek() != '>') fail("expected '>'");
        ++pos_;
        flush();
        return;
      }
      if (lookingAt("<![CDATA[")) {
        pos_ += 9;
        auto end = text_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA section");
        text += text_.substr(pos_, end - pos_);
        pos_ = end + 3;
      } else if (lookingAt("<!--")) {
        skipPast("-->", "comment");
      } else if (lookingAt("<?")) {
        skipPast("?>", "processing instruction");
      } else if (peek() == '<') {
        flush();
        node.children.push_back(element());
      } else {
        auto end = text_.find('<', pos_);
        if (end == std::string_view::npos) end = text_.size();
        text += decodeText(text_.substr(pos_, end - pos_));
        pos_ = end;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::map<std::string, std::string>> scopes_;
};

// ---------------------------------------------------------------- HTML

const std::set<std::string_view> kVoid{"area", "base",  "br",   "col",   "embed",
                                       "hr",   "img",   "input", "link", "meta",
                                       "param", "source", "track", "wbr"};
const std::set<std::string_view> kClosesP{
    "address", "article", "aside", "blockquote", "div", "dl", "fieldset", "footer", "form",
    "h1",      "h2",      "h3",    "h4",         "h5",  "h6", "header",   "hr",     "main",
    "nav",     "ol",      "p",     "pre",        "section", "table", "ul"};

class HtmlParser {
 public:
  explicit HtmlParser(std::string_view text) : text_(text) {
    if (text_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
    document_.name = "#document";
    stack_.push_back(&document_);
  }

  Node run() {
    while (pos_ < text_.size()) {
      if (text_[pos_] == '<') {
        if (lookingAt("<!--")) {
          auto end = text_.find("-->", pos_ + 4);
          pos_ = end == std::string_view::npos ? text_.size() : end + 3;
        } else if (lookingAt("<!") || lookingAt("<?")) {
          auto end = text_.find('>', pos_);
          pos_ = end == std::string_view::npos ? text_.size() : end + 1;
        } else if (lookingAt("</")) {
          endTag();
        } else if (pos_ + 1 < text_.size() &&
                   std::isalpha(static_cast<unsigned char>(text_[pos_ + 1]))) {
          startTag();
        } else {
          appendText("<");
          ++pos_;
        }
      } else {
        auto end = text_.find('<', pos_);
        if (end == std::string_view::npos) end = text_.size();
        appendText(decode(text_.substr(pos_, end - pos_)));
        pos_ = end;
      }
    }
    return normalize(std::move(document_));
  }

 private:
  bool lookingAt(std::string_view s) const {
    if (pos_ + s.size() > text_.size()) return false;
    return util::iequals(text_.substr(pos_, s.size()), s);
  }

  static std::string decode(std::string_view raw) {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '&') {
        std::size_t consumed = 0;
        if (decodeEntity(raw.substr(i + 1), true, out, consumed)) {
          i += consumed;
          continue;
        }
      }
      out += raw[i];
    }
    return out;
  }

  Node& current() { return *stack_.back(); }

  void appendText(std::string text) {
    auto& children = current().children;
    if (!children.empty() && children.back().kind == Node::Kind::Text) {
      children.back().text += text;
      return;
    }
    Node t;
    t.kind = Node::Kind::Text;
    t.text = std::move(text);
    children.push_back(std::move(t));
  }

  std::string readName() {
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '>' || c == '/' || c == '=') break;
      ++pos_;
    }
    return util::toLower(text_.substr(start, pos_ - start));
  }

  void skipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  // Pops up to and including the innermost open `name`, stopping at any of
  // `boundaries`.
  void closeIfOpen(std::string_view name, std::initializer_list<std::string_view> boundaries) {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      const auto& n = stack_[i]->name;
      if (n == name) {
        stack_.resize(i);
        return;
      }
      if (std::find(boundaries.begin(), boundaries.end(), n) != boundaries.end()) return;
    }
  }

  void startTag() {
    ++pos_;
    Node node;
    node.name = readName();
    node.localName = node.name;
    bool selfClosing = false;
    while (pos_ < text_.size()) {
      skipSpace();
      if (pos_ >= text_.size()) break;
      char c = text_[pos_];
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '/') {
        selfClosing = true;
        ++pos_;
        continue;
      }
      Attribute a;
      a.name = readName();
      if (a.name.empty()) {
        ++pos_;
        continue;
      }
      a.localName = a.name;
      skipSpace();
      if (pos_ < text_.size() && text_[pos_] == '=') {
        ++pos_;
        skipSpace();
        if (pos_ < text_.size() && (text_[pos_] == '"' || text_[pos_] == '\'')) {
          char q = text_[pos_++];
          auto end = text_.find(q, pos_);
          if (end == std::string_view::npos) end = text_.size();
          a.value = decode(text_.substr(pos_, end - pos_));
          pos_ = std::min(end + 1, text_.size());
        } else {
          std::size_t start = pos_;
          while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
                 text_[pos_] != '>')
            ++pos_;
          a.value = decode(text_.substr(start, pos_ - start));
        }
      }
      bool duplicate = std::any_of(node.attributes.begin(), node.attributes.end(),
                                   [&](const Attribute& o) { return o.name == a.name; });
      if (!duplicate) node.attributes.push_back(std::move(a));
    }

    const auto& n = node.name;
    if (kClosesP.contains(n)) closeIfOpen("p", {"button", "table", "td", "th"});
    if (n == "li") closeIfOpen("li", {"ul", "ol"});
    if (n == "dt" || n == "dd") {
      closeIfOpen("dt", {"dl"});
      closeIfOpen("dd", {"dl"});
    }
    if (n == "tr") closeIfOpen("tr", {"table", "tbody", "thead", "tfoot"});
    if (n == "td" || n == "th") {
      closeIfOpen("td", {"tr", "table"});
      closeIfOpen("th", {"tr", "table"});
    }
    if (n == "option") closeIfOpen("option", {"select"});

    bool isVoid = kVoid.contains(n);
    std::string name = n;
    current().children.push_back(std::move(node));
    if (isVoid || selfClosing) return;
    stack_.push_back(&current().children.back());
    if (name == "script" || name == "style" || name == "textarea" || name == "title") {
      rawText(name);
    }
  }

  void rawText(const std::string& name) {
    std::string closing = "</" + name;
    std::size_t end = pos_;
    while (true) {
      end = text_.find("</", end);
      if (end == std::string_view::npos) {
        end = text_.size();
        break;
      }
      if (util::iequals(text_.substr(end, closing.size()), closing)) break;
      end += 2;
    }
    if (end > pos_) {
      auto raw = text_.substr(pos_, end - pos_);
      appendText(name == "script" || name == "style" ? std::string(raw) : decode(raw));
    }
    pos_ = end;
  }

  void endTag() {
    pos_ += 2;
    auto name = readName();
    auto close = text_.find('>', pos_);
    pos_ = close == std::string_view::npos ? text_.size() : close + 1;
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->name == name) {
        stack_.resize(i);
        return;
      }
    }
  }

  static bool isBlankText(const Node& n) {
    return n.kind == Node::Kind::Text && util::trim(n.text).empty();
  }

  static Node makeElement(std::string name) {
    Node n;
    n.name = name;
    n.localName = std::move(name);
    return n;
  }

  static Node normalize(Node document) {
    Node html;
    auto isHtml = [](const Node& n) { return n.isElement() && n.name == "html"; };
    auto htmlIt = std::find_if(document.children.begin(), document.children.end(), isHtml);
    bool onlyHtml = htmlIt != document.children.end() &&
                    std::all_of(document.children.begin(), document.children.end(),
                                [&](const Node& n) { return &n == &*htmlIt || isBlankText(n); });
    if (onlyHtml) {
      html = std::move(*htmlIt);
    } else {
      html = makeElement("html");
      html.children = std::move(document.children);
    }
    bool hasBody = std::any_of(html.children.begin(), html.children.end(),
                               [](const Node& n) { return n.isElement() && n.name == "body"; });
    if (!hasBody) {
      Node body = makeElement("body");
      std::vector<Node> kept;
      for (auto& child : html.children) {
        if (child.isElement() && child.name == "head") {
          kept.push_back(std::move(child));
        } else {
          body.children.push_back(std::move(child));
        }
      }
      kept.push_back(std::move(body));
      html.children = std::move(kept);
    }
    return html;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Node document_;
  std::vector<Node*> stack_;
};

// ---------------------------------------------------------------- selectors

struct Compound {
  std::string tag;  // empty or "*" = any
  std::vector<std::string> classes;
  std::vector<std::string> ids;
};

struct Complex {
  std::vector<Compound> parts;
  std::vector<char> combinators;  // between parts[i] and parts[i+1]: ' ' or '>'
};

[[noreturn]] void selectorError(std::string_view selector, const std::string& msg) {
  throw Error(ErrorKind::Config, "unsupported html.selector '" + std::string(selector) + "': " + msg);
}

std::vector<Complex> parseSelector(std::string_view selector) {
  std::vector<Complex> out;
  for (const auto& groupRaw : util::split(selector, ',')) {
    auto group = util::trim(groupRaw);
    if (group.empty()) selectorError(selector, "empty selector");
    Complex complex;
    std::size_t i = 0;
    char pending = 0;
    while (i < group.size()) {
      char c = group[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!pending) pending = ' ';
        ++i;
        continue;
      }
      if (c == '>') {
        if (complex.parts.empty()) selectorError(selector, "leading combinator");
        pending = '>';
        ++i;
        continue;
      }
      if (c == '+' || c == '~' || c == '[' || c == ':' || c == '(') {
        selectorError(selector, std::string("'") + c + "' is not supported");
      }
      if (!complex.parts.empty()) {
        if (!pending) selectorError(selector, "missing combinator");
        complex.combinators.push_back(pending);
      }
      pending = 0;
      Compound compound;
      auto readIdent = [&] {
        std::size_t start = i;
        while (i < group.size() &&
               (std::isalnum(static_cast<unsigned char>(group[i])) || group[i] == '-' ||
                group[i] == '_'))
          ++i;
        if (start == i) selectorError(selector, "expected identifier");
        return std::string(group.substr(start, i - start));
      };
      if (group[i] == '*') {
        compound.tag = "*";
        ++i;
      } else if (std::isalpha(static_cast<unsigned char>(group[i]))) {
        compound.tag = util::toLower(readIdent());
      }
      while (i < group.size() && (group[i] == '.' || group[i] == '#')) {
        char kind = group[i++];
        (kind == '.' ? compound.classes : compound.ids).push_back(readIdent());
      }
      if (compound.tag.empty() && compound.classes.empty() && compound.ids.empty()) {
        selectorError(selector, std::string("unexpected '") + group[i] + "'");
      }
      complex.parts.push_back(std::move(compound));
    }
    if (pending == '>') selectorError(selector, "trailing combinator");
    out.push_back(std::move(complex));
  }
  return out;
}

bool matchesCompound(const Compound& c, const Node& n) {
  if (!n.isElement()) return false;
  if (!c.tag.empty() && c.tag != "*" && n.name != c.tag) return false;
  for (const auto& id : c.ids) {
    const auto* v = n.attribute("id");
    if (!v || *v != id) return false;
  }
  if (!c.classes.empty()) {
    const auto* v = n.attribute("class");
    if (!v) return false;
    std::set<std::string> have;
    std::string token;
    for (char ch : *v + " ") {
      if (std::isspace(static_cast<unsigned char>(ch))) {
        if (!token.empty()) have.insert(token);
        token.clear();
      } else {
        token += ch;
      }
    }
    for (const auto& cls : c.classes) {
      if (!have.contains(cls)) return false;
    }
  }
  return true;
}

// Right-to-left match of parts[0..last] against `n` with ancestors
// `path` (outermost first).
bool matchesComplex(const Complex& c, std::size_t last, const Node& n,
                    const std::vector<const Node*>& path, std::size_t pathEnd) {
  if (!matchesCompound(c.parts[last], n)) return false;
  if (last == 0) return true;
  char comb = c.combinators[last - 1];
  if (comb == '>') {
    if (pathEnd == 0) return false;
    return matchesComplex(c, last - 1, *path[pathEnd - 1], path, pathEnd - 1);
  }
  for (std::size_t i = pathEnd; i-- > 0;) {
    if (matchesComplex(c, last - 1, *path[i], path, i)) return true;
  }
  return false;
}

void walkCss(const Node& n, const std::vector<Complex>& selector, std::vector<const Node*>& path,
             std::vector<const Node*>& out) {
  if (!n.isElement()) return;
  for (const auto& complex : selector) {
    if (matchesComplex(complex, complex.parts.size() - 1, n, path, path.size())) {
      out.push_back(&n);
      break;
    }
  }
  path.push_back(&n);
  for (const auto& child : n.children) walkCss(child, selector, path, out);
  path.pop_back();
}

}  // namespace

const std::string* Node::attribute(std::string_view attrName) const {
  for (const auto& a : attributes) {
    if (a.name == attrName) return &a.value;
  }
  return nullptr;
}

Node parseXml(std::string_view text) { return XmlParser(text).run(); }

Node parseHtml(std::string_view text) { return HtmlParser(text).run(); }

std::vector<const Node*> selectCss(const Node& root, std::string_view selector) {
  auto parsed = parseSelector(selector);
  std::vector<const Node*> path;
  std::vector<const Node*> out;
  walkCss(root, parsed, path, out);
  return out;
}

std::vector<const Node*> selectXPath(const Node& documentElement, std::string_view path) {
  struct Step {
    bool descendant = false;
    std::string name;
    std::optional<std::size_t> position;
  };
  auto fail = [&](const std::string& msg) -> void {
    throw Error(ErrorKind::Config, "unsupported xml.path '" + std::string(path) + "': " + msg);
  };
  if (path.empty() || path[0] != '/') fail("only absolute paths are supported");
  std::vector<Step> steps;
  std::size_t i = 0;
  while (i < path.size()) {
    Step step;
    if (path.compare(i, 2, "//") == 0) {
      step.descendant = true;
      i += 2;
    } else if (path[i] == '/') {
      ++i;
    } else {
      fail("expected '/'");
    }
    std::size_t start = i;
    while (i < path.size() && path[i] != '/' && path[i] != '[') ++i;
    step.name = std::string(path.substr(start, i - start));
    if (step.name.empty()) fail("empty step");
    if (step.name != "*") {
      for (char c : step.name) {
        if (!isNameChar(c)) fail(std::string("'") + c + "' is not supported");
      }
    }
    if (i < path.size() && path[i] == '[') {
      auto close = path.find(']', i);
      if (close == std::string_view::npos) fail("unterminated predicate");
      auto inner = path.substr(i + 1, close - i - 1);
      std::size_t n = 0;
      for (char c : inner) {
        if (!std::isdigit(static_cast<unsigned char>(c))) fail("only [n] predicates are supported");
        n = n * 10 + static_cast<std::size_t>(c - '0');
      }
      if (inner.empty() || n == 0) fail("position predicates start at 1");
      step.position = n;
      i = close + 1;
    }
    steps.push_back(std::move(step));
  }

  auto nameMatches = [](const Step& s, const Node& n) {
    if (!n.isElement()) return false;
    if (s.name == "*") return true;
    return s.name.find(':') == std::string::npos ? n.localName == s.name : n.name == s.name;
  };

  // Document order index for de-duplication and sorting.
  std::unordered_map<const Node*, std::size_t> order;
  auto number = [&](auto&& self, const Node& n) -> void {
    order[&n] = order.size();
    for (const auto& c : n.children) self(self, c);
  };
  number(number, documentElement);

  Node documentNode;
  std::vector<const Node*> context{&documentNode};
  for (const auto& step : steps) {
    std::vector<const Node*> next;
    for (const Node* ctx : context) {
      std::vector<const Node*> candidates;
      auto childrenOf = [&](const Node& n) -> std::vector<const Node*> {
        if (&n == &documentNode) return {&documentElement};
        std::vector<const Node*> out;
        for (const auto& c : n.children) out.push_back(&c);
        return out;
      };
      if (step.descendant) {
        auto collect = [&](auto&& self, const Node& n) -> void {
          for (const Node* c : childrenOf(n)) {
            if (nameMatches(step, *c)) candidates.push_back(c);
            self(self, *c);
          }
        };
        collect(collect, *ctx);
      } else {
        for (const Node* c : childrenOf(*ctx)) {
          if (nameMatches(step, *c)) candidates.push_back(c);
        }
      }
      if (step.position) {
        if (*step.position <= candidates.size()) next.push_back(candidates[*step.position - 1]);
      } else {
        next.insert(next.end(), candidates.begin(), candidates.end());
      }
    }
    std::sort(next.begin(), next.end(),
              [&](const Node* a, const Node* b) { return order[a] < order[b]; });
    next.erase(std::unique(next.begin(), next.end()), next.end());
    context = std::move(next);
  }
  return context;
}

}  // namespace facadex::triplify::markup
