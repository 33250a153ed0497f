#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace facadex::triplify::markup {

struct Attribute {
  std::string name;       // as written
  std::string localName;
  std::string nsUri;      // empty when unqualified
  std::string value;
};

struct Node {
  enum class Kind { Element, Text };

  Kind kind = Kind::Element;
  std::string name;       // qualified name; lowercase for HTML
  std::string localName;
  std::string nsUri;
  std::vector<Attribute> attributes;
  std::vector<Node> children;
  std::string text;       // Text nodes only

  bool isElement() const { return kind == Kind::Element; }
  const std::string* attribute(std::string_view name) const;
};

// Namespace-aware, strict. Returns the document element. Error(Format) on
// malformed input.
Node parseXml(std::string_view text);

// Error-tolerant HTML parsing with implied end tags. Always returns an
// <html> element holding an optional <head> and a <body>.
Node parseHtml(std::string_view text);

// CSS selector subset: type, '*', .class, #id, descendant (' ') and child
// ('>') combinators, grouping with ','. Matches in document order.
std::vector<const Node*> selectCss(const Node& root, std::string_view selector);

// XPath subset: absolute location paths of child ('/') and descendant ('//')
// steps with a name test or '*' and an optional [n] position predicate.
std::vector<const Node*> selectXPath(const Node& documentElement, std::string_view path);

}  // namespace facadex::triplify::markup
