#include <json.hpp>

#include <charconv>
#include <limits>

#include "facadex/error.hpp"
#include "internal.hpp"

namespace facadex::triplify {
namespace {

using Json = nlohmann::ordered_json;

// JSONPath subset: $, .name, ['name'], [n], [*], .*, and '..' recursive
// descent in front of any of these.
class JsonPath {
 public:
  explicit JsonPath(std::string_view expr) : expr_(expr) {
    if (expr_.empty() || expr_[0] != '$') fail("must start with '$'");
    pos_ = 1;
    while (pos_ < expr_.size()) steps_.push_back(parseStep());
  }

  std::vector<const Json*> select(const Json& doc) const {
    std::vector<const Json*> current{&doc};
    for (const auto& step : steps_) {
      std::vector<const Json*> next;
      for (const Json* node : current) {
        if (step.recursive) {
          std::vector<const Json*> all;
          collectDescendants(*node, all);
          for (const Json* d : all) apply(step, *d, next);
        } else {
          apply(step, *node, next);
        }
      }
      current = std::move(next);
    }
    return current;
  }

 private:
  struct Step {
    enum class Kind { Name, Index, Wildcard } kind = Kind::Name;
    std::string name;
    long long index = 0;
    bool recursive = false;
  };

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::Config, "invalid json.path '" + std::string(expr_) + "': " + msg);
  }

  Step parseStep() {
    Step step;
    if (expr_.compare(pos_, 2, "..") == 0) {
      step.recursive = true;
      pos_ += 2;
      if (pos_ < expr_.size() && expr_[pos_] == '[') return parseBracket(step);
      return parseName(step);
    }
    if (expr_[pos_] == '.') {
      ++pos_;
      return parseName(step);
    }
    if (expr_[pos_] == '[') return parseBracket(step);
    fail("unexpected character '" + std::string(1, expr_[pos_]) + "'");
  }

  Step parseName(Step step) {
    if (pos_ < expr_.size() && expr_[pos_] == '*') {
      ++pos_;
      step.kind = Step::Kind::Wildcard;
      return step;
    }
    std::size_t start = pos_;
    while (pos_ < expr_.size() && expr_[pos_] != '.' && expr_[pos_] != '[') ++pos_;
    if (start == pos_) fail("empty name step");
    step.kind = Step::Kind::Name;
    step.name = std::string(expr_.substr(start, pos_ - start));
    return step;
  }

  Step parseBracket(Step step) {
    ++pos_;  // '['
    auto close = expr_.find(']', pos_);
    if (close == std::string_view::npos) fail("unterminated '['");
    auto inner = expr_.substr(pos_, close - pos_);
    pos_ = close + 1;
    if (inner == "*") {
      step.kind = Step::Kind::Wildcard;
    } else if (inner.size() >= 2 && (inner[0] == '\'' || inner[0] == '"') &&
               inner.back() == inner[0]) {
      step.kind = Step::Kind::Name;
      step.name = std::string(inner.substr(1, inner.size() - 2));
    } else {
      long long n = 0;
      auto [p, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), n);
      if (ec != std::errc() || p != inner.data() + inner.size()) {
        fail("unsupported bracket expression [" + std::string(inner) + "]");
      }
      step.kind = Step::Kind::Index;
      step.index = n;
    }
    return step;
  }

  static void collectDescendants(const Json& node, std::vector<const Json*>& out) {
    out.push_back(&node);
    if (node.is_object() || node.is_array()) {
      for (const auto& child : node) collectDescendants(child, out);
    }
  }

  static void apply(const Step& step, const Json& node, std::vector<const Json*>& out) {
    switch (step.kind) {
      case Step::Kind::Name:
        if (node.is_object()) {
          auto it = node.find(step.name);
          if (it != node.end()) out.push_back(&*it);
        }
        break;
      case Step::Kind::Index:
        if (node.is_array()) {
          long long size = static_cast<long long>(node.size());
          long long i = step.index < 0 ? size + step.index : step.index;
          if (i >= 0 && i < size) out.push_back(&node[static_cast<std::size_t>(i)]);
        }
        break;
      case Step::Kind::Wildcard:
        if (node.is_object() || node.is_array()) {
          for (const auto& child : node) out.push_back(&child);
        }
        break;
    }
  }

  std::string_view expr_;
  std::size_t pos_ = 0;
  std::vector<Step> steps_;
};

Json parseJson(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Format, "JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

rdf::Term scalarLiteral(const Json& v) {
  switch (v.type()) {
    case Json::value_t::string: return rdf::Term::literal(v.get<std::string>());
    case Json::value_t::boolean: return rdf::Term::boolean(v.get<bool>());
    case Json::value_t::number_integer:
    case Json::value_t::number_unsigned: return detail::numberLiteral(v.dump(), true);
    case Json::value_t::number_float: return detail::numberLiteral(v.dump(), false);
    default: return rdf::Term::literal(v.dump());
  }
}

void emitValue(FacadeBuilder& out, const rdf::Term& parent, const SlotKey& slot, const Json& v);

void emitChildren(FacadeBuilder& out, const rdf::Term& container, const Json& v) {
  if (v.is_object()) {
    for (const auto& [key, child] : v.items()) emitValue(out, container, SlotKey::key(key), child);
  } else {
    for (const auto& child : v) {
      if (child.is_null()) continue;
      emitValue(out, container, SlotKey::next(), child);
    }
  }
}

void emitValue(FacadeBuilder& out, const rdf::Term& parent, const SlotKey& slot, const Json& v) {
  if (v.is_null()) return;
  if (v.is_object() || v.is_array()) {
    auto container = out.container(parent, slot);
    emitChildren(out, container, v);
    return;
  }
  out.value(parent, slot, scalarLiteral(v));
}

// Units hung directly under the root: json.path matches, or for slicing
// the elements of a top-level array.
std::vector<const Json*> selectUnits(const Json& doc, const config::FacadeOptions& options,
                                     bool forSlicing) {
  if (auto path = options.get(config::opt::kJsonPath)) return JsonPath(*path).select(doc);
  if (forSlicing && !doc.is_array()) {
    throw Error(ErrorKind::Config, "slice requires a top-level JSON array or json.path");
  }
  std::vector<const Json*> units;
  for (const auto& child : doc) units.push_back(&child);
  return units;
}

}  // namespace

void triplifyJson(std::string_view text, const config::FacadeOptions& options, FacadeBuilder& out) {
  Json doc = parseJson(text);
  auto root = out.root();
  if (options.contains(config::opt::kJsonPath)) {
    for (const Json* match : selectUnits(doc, options, false)) {
      if (match->is_null()) continue;
      emitValue(out, root, SlotKey::next(), *match);
    }
    return;
  }
  if (doc.is_object() || doc.is_array()) {
    emitChildren(out, root, doc);
  } else if (!doc.is_null()) {
    out.value(root, SlotKey::index(1), scalarLiteral(doc));
  }
}

namespace detail {

rdf::Term numberLiteral(std::string_view lexical, bool integral) {
  if (integral) {
    long long n = 0;
    auto [p, ec] = std::from_chars(lexical.data(), lexical.data() + lexical.size(), n);
    bool fits = ec == std::errc() && p == lexical.data() + lexical.size() &&
                n >= std::numeric_limits<std::int32_t>::min() &&
                n <= std::numeric_limits<std::int32_t>::max();
    return rdf::Term::literal(std::string(lexical),
                              std::string(fits ? vocab::kXsdInt : vocab::kXsdInteger));
  }
  return rdf::Term::literal(std::string(lexical), std::string(vocab::kXsdFloat));
}

void sliceJson(std::string_view text, const config::FacadeOptions& options,
               const BuilderFactory& makeBuilder, const UnitSink& onUnit) {
  Json doc = parseJson(text);
  std::int64_t index = 0;
  for (const Json* unit : selectUnits(doc, options, true)) {
    if (unit->is_null()) continue;
    auto builder = makeBuilder();
    if (!unit->is_structured() && builder.drops(scalarLiteral(*unit))) continue;
    auto root = builder.root();
    emitValue(builder, root, SlotKey::index(++index), *unit);
    onUnit(std::move(builder).finish());
  }
}

}  // namespace detail
}  // namespace facadex::triplify
