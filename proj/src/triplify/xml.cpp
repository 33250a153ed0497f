#include "facadex/error.hpp"
#include "facadex/util/text.hpp"
#include "internal.hpp"
#include "markup.hpp"

namespace facadex::triplify {
namespace {

using markup::Node;

bool isBlankText(const Node& n) {
  return n.kind == Node::Kind::Text && util::trim(n.text).empty();
}

rdf::Term elementType(const FacadeBuilder& out, const Node& n) {
  if (!n.nsUri.empty()) return rdf::Term::iri(n.nsUri + n.localName);
  return out.typeIri(n.localName.empty() ? n.name : n.localName);
}

void emitAttributes(FacadeBuilder& out, const rdf::Term& container, const Node& n) {
  for (const auto& a : n.attributes) {
    auto slot = a.nsUri.empty() ? SlotKey::key(a.localName.empty() ? a.name : a.localName)
                                : SlotKey::iri(a.nsUri + a.localName);
    out.value(container, slot, rdf::Term::literal(a.value));
  }
}

void fillElement(FacadeBuilder& out, const rdf::Term& container, const Node& n);

void emitElement(FacadeBuilder& out, const rdf::Term& parent, const SlotKey& slot, const Node& n) {
  auto container = out.container(parent, slot);
  fillElement(out, container, n);
}

void fillElement(FacadeBuilder& out, const rdf::Term& container, const Node& n) {
  out.addType(container, elementType(out, n));
  emitAttributes(out, container, n);
  for (const auto& child : n.children) {
    if (isBlankText(child)) continue;
    auto slot = SlotKey::next();
    if (child.isElement()) {
      emitElement(out, container, slot, child);
    } else {
      out.value(container, slot, rdf::Term::literal(child.text));
    }
  }
}

void emitMatches(FacadeBuilder& out, const std::vector<const Node*>& matches) {
  auto root = out.root();
  for (const Node* m : matches) emitElement(out, root, SlotKey::next(), *m);
}

}  // namespace

void triplifyXml(std::string_view text, const config::FacadeOptions& options, FacadeBuilder& out) {
  Node doc = markup::parseXml(text);
  if (auto path = options.get(config::opt::kXmlPath)) {
    emitMatches(out, markup::selectXPath(doc, *path));
    return;
  }
  fillElement(out, out.root(), doc);
}

void triplifyHtml(std::string_view text, const config::FacadeOptions& options, FacadeBuilder& out) {
  Node doc = markup::parseHtml(text);
  if (auto selector = options.get(config::opt::kHtmlSelector)) {
    emitMatches(out, markup::selectCss(doc, *selector));
    return;
  }
  fillElement(out, out.root(), doc);
}

namespace detail {

// Units are the child nodes of the document element, each at the index
// it has in the full triplification and under a root carrying the document
// element's type and attributes; or xml.path matches under a bare root.
void sliceXml(std::string_view text, const config::FacadeOptions& options,
              const BuilderFactory& makeBuilder, const UnitSink& onUnit) {
  Node doc = markup::parseXml(text);
  if (auto path = options.get(config::opt::kXmlPath)) {
    std::int64_t index = 0;
    for (const Node* m : markup::selectXPath(doc, *path)) {
      auto builder = makeBuilder();
      auto root = builder.root();
      emitElement(builder, root, SlotKey::index(++index), *m);
      onUnit(std::move(builder).finish());
    }
    return;
  }
  std::int64_t index = 0;
  for (const auto& child : doc.children) {
    if (isBlankText(child)) continue;
    auto builder = makeBuilder();
    auto text = rdf::Term::literal(child.text);
    if (!child.isElement() && builder.drops(text)) continue;
    ++index;
    auto root = builder.root();
    builder.addType(root, elementType(builder, doc));
    emitAttributes(builder, root, doc);
    if (child.isElement()) {
      emitElement(builder, root, SlotKey::index(index), child);
    } else {
      builder.value(root, SlotKey::index(index), std::move(text));
    }
    onUnit(std::move(builder).finish());
  }
}

}  // namespace detail
}  // namespace facadex::triplify
