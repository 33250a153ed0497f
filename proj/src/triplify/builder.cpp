#include "facadex/triplify/builder.hpp"

#include <cctype>

#include "facadex/error.hpp"
#include "facadex/util/text.hpp"

namespace facadex::triplify {
namespace {

// Prefix-free mapping of a slot path onto blank-node label characters.
std::string labelSafe(std::string_view path) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned char c : path) {
    if (c == '/') {
      out += '_';
    } else if (std::isalnum(c) && c != 'x') {
      out += static_cast<char>(c);
    } else {
      out += 'x';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

}  // namespace

BuilderSettings BuilderSettings::fromOptions(const config::FacadeOptions& options) {
  BuilderSettings s;
  if (auto ns = options.get(config::opt::kNamespace)) {
    if (!rdf::hasScheme(*ns)) {
      throw Error(ErrorKind::Config, "namespace must be an absolute IRI: " + *ns);
    }
    s.ns = *ns;
  }
  s.blankNodes = options.getBool(config::opt::kBlankNodes, true);
  s.trimStrings = options.getBool(config::opt::kTrimStrings, false);
  s.nullString = options.get(config::opt::kNullString);
  return s;
}

FacadeBuilder::FacadeBuilder(BuilderSettings settings, std::string sourceIdentity,
                             TripleFilter filter)
    : settings_(std::move(settings)), identity_(std::move(sourceIdentity)), filter_(std::move(filter)) {
  if (auto hash = identity_.find('#'); hash != std::string::npos) identity_.erase(hash);
  labelPrefix_ = "s" + util::toHex(util::fnv1a(identity_)).substr(0, 12) + "r";
}

rdf::Term FacadeBuilder::mint(const std::string& path) const {
  if (settings_.blankNodes) return rdf::Term::blank(labelPrefix_ + labelSafe(path));
  return rdf::Term::iri(identity_ + "#" + (path.empty() ? "/" : path));
}

const rdf::Term& FacadeBuilder::root() {
  if (!root_) {
    root_ = mint("");
    containers_[*root_] = ContainerState{};
    emit(*root_, rdf::Term::iri(std::string(vocab::kRdfType)),
         rdf::Term::iri(std::string(vocab::kFxRoot)));
  }
  return *root_;
}

FacadeBuilder::ContainerState& FacadeBuilder::state(const rdf::Term& container) {
  auto it = containers_.find(container);
  if (it == containers_.end()) {
    throw std::logic_error("unknown container " + container.toNTriples());
  }
  return it->second;
}

rdf::Term FacadeBuilder::keyPredicate(std::string_view key) const {
  return rdf::Term::iri(settings_.ns + util::encodeLocalName(key));
}

rdf::Term FacadeBuilder::typeIri(std::string_view name) const {
  return rdf::Term::iri(settings_.ns + util::encodeLocalName(name));
}

rdf::Term FacadeBuilder::predicateFor(const rdf::Term& parent, const SlotKey& slot,
                                      std::string& segment) {
  auto& st = state(parent);
  rdf::Term predicate;
  if (const auto* key = std::get_if<SlotKey::Key>(&slot.value_)) {
    predicate = keyPredicate(key->name);
    segment = util::encodeLocalName(key->name);
  } else if (const auto* iri = std::get_if<SlotKey::Iri>(&slot.value_)) {
    predicate = rdf::Term::iri(iri->predicate);
    segment = util::encodeLocalName(iri->predicate);
  } else {
    auto n = std::get<std::int64_t>(slot.value_);
    if (n == 0) n = st.nextIndex;
    predicate = rdf::mkContainerMembership(n);
    segment = std::to_string(n);
    st.nextIndex = std::max(st.nextIndex, n + 1);
  }
  if (!st.usedPredicates.insert(predicate.value()).second) {
    throw Error(ErrorKind::Format, "duplicate slot " + predicate.toNTriples() + " in container " +
                                       parent.toNTriples());
  }
  return predicate;
}

rdf::Term FacadeBuilder::container(const rdf::Term& parent, const SlotKey& slot) {
  std::string segment;
  auto predicate = predicateFor(parent, slot, segment);
  std::string path = state(parent).path + "/" + segment;
  auto child = mint(path);
  containers_[child] = ContainerState{path, 1, {}};
  emit(parent, std::move(predicate), child);
  return child;
}

rdf::Term FacadeBuilder::appendContainer(const rdf::Term& parent) {
  return container(parent, SlotKey::next());
}

bool FacadeBuilder::drops(const rdf::Term& literal) const {
  if (!settings_.nullString || !literal.isPlainString()) return false;
  std::string_view v = literal.value();
  return (settings_.trimStrings ? util::trim(v) : v) == *settings_.nullString;
}

void FacadeBuilder::value(const rdf::Term& parent, const SlotKey& slot, rdf::Term literal) {
  if (drops(literal)) return;
  if (settings_.trimStrings && literal.isPlainString()) {
    literal = rdf::Term::literal(std::string(util::trim(literal.value())));
  }
  std::string segment;
  auto predicate = predicateFor(parent, slot, segment);
  emit(parent, std::move(predicate), std::move(literal));
}

void FacadeBuilder::appendValue(const rdf::Term& parent, rdf::Term literal) {
  value(parent, SlotKey::next(), std::move(literal));
}

void FacadeBuilder::addType(const rdf::Term& container, const rdf::Term& type) {
  emit(container, rdf::Term::iri(std::string(vocab::kRdfType)), type);
}

void FacadeBuilder::emit(rdf::Term s, rdf::Term p, rdf::Term o) {
  rdf::Triple t{std::move(s), std::move(p), std::move(o)};
  if (filter_ && !filter_(t)) return;
  graph_.insert(std::move(t));
}

rdf::Graph FacadeBuilder::finish() && {
  root();
  return std::move(graph_);
}

}  // namespace facadex::triplify
