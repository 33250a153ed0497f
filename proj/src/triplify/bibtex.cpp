#include <cctype>

#include "facadex/error.hpp"
#include "facadex/util/text.hpp"
#include "internal.hpp"

namespace facadex::triplify {
namespace {

struct Entry {
  std::string type;
  std::string key;
  std::vector<std::pair<std::string, std::string>> fields;
};

class BibParser {
 public:
  explicit BibParser(std::string_view text) : text_(text) {}

  std::vector<Entry> run() {
    std::vector<Entry> entries;
    while (true) {
      auto at = text_.find('@', pos_);
      if (at == std::string_view::npos) break;
      pos_ = at + 1;
      skipSpace();
      auto type = util::toLower(ident());
      skipSpace();
      if (atEnd() || (peek() != '{' && peek() != '(')) {
        fail("expected '{' after @" + type);
      }
      char close = peek() == '{' ? '}' : ')';
      ++pos_;
      if (type == "comment" || type == "preamble" || type == "string") {
        skipBalanced(close);
        continue;
      }
      entries.push_back(entry(type, close));
    }
    return entries;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::string where = currentKey_.empty() ? "" : " in entry '" + currentKey_ + "'";
    throw Error(ErrorKind::Format, "BibTeX" + where + ": " + msg);
  }

  bool atEnd() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void skipSpace() {
    while (!atEnd() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  std::string ident() {
    std::size_t start = pos_;
    while (!atEnd()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c)) || c == '{' || c == '(' || c == '}' ||
          c == ')' || c == ',' || c == '=' || c == '"' || c == '#')
        break;
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  void skipBalanced(char close) {
    int depth = 1;
    while (!atEnd()) {
      char c = text_[pos_++];
      if (c == '{' || (close == ')' && c == '(')) ++depth;
      if (c == '}' || (close == ')' && c == ')')) {
        if (--depth == 0) return;
      }
    }
    fail("unbalanced braces");
  }

  // Body of a {...} value, with pos_ just past the opening brace.
  std::string braced() {
    std::size_t start = pos_;
    int depth = 1;
    while (!atEnd()) {
      char c = text_[pos_++];
      if (c == '\\' && !atEnd()) {
        ++pos_;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        return std::string(text_.substr(start, pos_ - 1 - start));
      }
    }
    fail("unbalanced braces");
  }

  std::string quoted() {
    std::size_t start = pos_;
    int depth = 0;
    while (!atEnd()) {
      char c = text_[pos_++];
      if (c == '\\' && !atEnd()) {
        ++pos_;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        if (--depth < 0) fail("unbalanced braces");
      } else if (c == '"' && depth == 0) {
        return std::string(text_.substr(start, pos_ - 1 - start));
      }
    }
    fail("unterminated quoted value");
  }

  Entry entry(std::string type, char close) {
    Entry e;
    e.type = std::move(type);
    currentKey_.clear();
    skipSpace();
    std::size_t keyStart = pos_;
    while (!atEnd() && peek() != ',' && peek() != close && !std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    e.key = std::string(text_.substr(keyStart, pos_ - keyStart));
    currentKey_ = e.key;
    while (true) {
      skipSpace();
      if (atEnd()) fail("unbalanced braces");
      if (peek() == close) {
        ++pos_;
        return e;
      }
      if (peek() != ',') fail(std::string("unexpected '") + peek() + "'");
      ++pos_;
      skipSpace();
      if (atEnd()) fail("unbalanced braces");
      if (peek() == close) continue;
      auto name = util::toLower(ident());
      if (name.empty()) fail("expected field name");
      skipSpace();
      if (atEnd() || peek() != '=') fail("expected '=' after field " + name);
      ++pos_;
      skipSpace();
      if (atEnd()) fail("unbalanced braces");
      std::string value;
      if (peek() == '{') {
        ++pos_;
        value = braced();
      } else if (peek() == '"') {
        ++pos_;
        value = quoted();
      } else {
        value = ident();
        if (value.empty()) fail("expected value for field " + name);
      }
      skipSpace();
      if (!atEnd() && peek() == '#') fail("string concatenation is not supported");
      e.fields.emplace_back(std::move(name), std::move(value));
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::string currentKey_;
};

}  // namespace

void triplifyBibtex(std::string_view text, const config::FacadeOptions&, FacadeBuilder& out) {
  auto entries = BibParser(text).run();
  auto root = out.root();
  for (const auto& e : entries) {
    auto node = out.appendContainer(root);
    out.addType(node, out.typeIri(e.type));
    out.value(node, SlotKey::key("citationKey"), rdf::Term::literal(e.key));
    for (const auto& [name, value] : e.fields) {
      out.value(node, SlotKey::key(name), rdf::Term::literal(value));
    }
  }
}

}  // namespace facadex::triplify
