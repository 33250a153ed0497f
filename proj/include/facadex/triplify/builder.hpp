#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>

#include "facadex/config/options.hpp"
#include "facadex/rdf/graph.hpp"

namespace facadex::triplify {

// A slot label: a string key (minted in the namespace), a sequence index
// (rdf:_n), or a ready-made predicate IRI (reused XML namespaces).
class SlotKey {
 public:
  static SlotKey key(std::string name) { return SlotKey(Key{std::move(name)}); }
  static SlotKey index(std::int64_t n) { return SlotKey(n); }
  // The container's next free index, taken only if a triple is emitted.
  static SlotKey next() { return SlotKey(std::int64_t{0}); }
  static SlotKey iri(std::string predicate) { return SlotKey(Iri{std::move(predicate)}); }

  bool isIndex() const { return std::holds_alternative<std::int64_t>(value_); }
  std::int64_t indexValue() const { return std::get<std::int64_t>(value_); }

 private:
  friend class FacadeBuilder;
  struct Key {
    std::string name;
  };
  struct Iri {
    std::string predicate;
  };
  explicit SlotKey(std::variant<Key, std::int64_t, Iri> v) : value_(std::move(v)) {}
  std::variant<Key, std::int64_t, Iri> value_;
};

using TripleFilter = std::function<bool(const rdf::Triple&)>;

struct BuilderSettings {
  std::string ns = std::string(vocab::kXyz);
  bool blankNodes = true;
  bool trimStrings = false;
  std::optional<std::string> nullString;

  static BuilderSettings fromOptions(const config::FacadeOptions& options);
};

// Emits one Façade-X graph: a single root, containers linked by unique slots,
// values as literals. Container nodes are derived from the source identity
// and the slot path, so repeated runs produce identical labels / IRIs.
class FacadeBuilder {
 public:
  FacadeBuilder(BuilderSettings settings, std::string sourceIdentity, TripleFilter filter = {});

  // Creates the root on first use and types it fx:root.
  const rdf::Term& root();

  rdf::Term container(const rdf::Term& parent, const SlotKey& slot);
  rdf::Term appendContainer(const rdf::Term& parent);
  void value(const rdf::Term& parent, const SlotKey& slot, rdf::Term literal);
  void appendValue(const rdf::Term& parent, rdf::Term literal);
  void addType(const rdf::Term& container, const rdf::Term& type);

  // Whether value() would drop this literal (null-string, after trimming).
  bool drops(const rdf::Term& literal) const;

  rdf::Term keyPredicate(std::string_view key) const;
  rdf::Term typeIri(std::string_view name) const;
  const BuilderSettings& settings() const { return settings_; }

  rdf::Graph finish() &&;

 private:
  struct ContainerState {
    std::string path;
    std::int64_t nextIndex = 1;
    std::unordered_set<std::string> usedPredicates;
  };

  rdf::Term predicateFor(const rdf::Term& parent, const SlotKey& slot, std::string& segment);
  rdf::Term mint(const std::string& path) const;
  void emit(rdf::Term s, rdf::Term p, rdf::Term o);
  ContainerState& state(const rdf::Term& container);

  BuilderSettings settings_;
  std::string identity_;
  std::string labelPrefix_;
  TripleFilter filter_;
  std::optional<rdf::Term> root_;
  std::unordered_map<rdf::Term, ContainerState, rdf::TermHash> containers_;
  rdf::Graph graph_;
};

}  // namespace facadex::triplify
