#include <yaml-cpp/yaml.h>

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <regex>

#include "facadex/error.hpp"
#include "internal.hpp"

namespace facadex::triplify {
namespace {

constexpr std::string_view kCoreTagPrefix = "tag:yaml.org,2002:";

enum class ScalarKind { Null, Bool, Int, Float, String };

// YAML 1.2 core schema resolution for plain scalars.
ScalarKind resolvePlain(const std::string& s) {
  static const std::regex kNull("~|null|Null|NULL|");
  static const std::regex kBool("true|True|TRUE|false|False|FALSE");
  static const std::regex kInt("[-+]?[0-9]+|0o[0-7]+|0x[0-9a-fA-F]+");
  static const std::regex kFloat(
      "[-+]?(\\.[0-9]+|[0-9]+(\\.[0-9]*)?)([eE][-+]?[0-9]+)?|[-+]?\\.(inf|Inf|INF)|\\.(nan|NaN|NAN)");
  if (std::regex_match(s, kNull)) return ScalarKind::Null;
  if (std::regex_match(s, kBool)) return ScalarKind::Bool;
  if (std::regex_match(s, kInt)) return ScalarKind::Int;
  if (std::regex_match(s, kFloat)) return ScalarKind::Float;
  return ScalarKind::String;
}

ScalarKind scalarKind(const YAML::Node& node) {
  const auto& tag = node.Tag();
  if (tag == "!") return ScalarKind::String;  // quoted
  if (tag.starts_with(kCoreTagPrefix)) {
    auto t = std::string_view(tag).substr(kCoreTagPrefix.size());
    if (t == "null") return ScalarKind::Null;
    if (t == "bool") return ScalarKind::Bool;
    if (t == "int") return ScalarKind::Int;
    if (t == "float") return ScalarKind::Float;
    return ScalarKind::String;
  }
  if (tag == "?" || tag.empty()) return resolvePlain(node.Scalar());
  return ScalarKind::String;
}

rdf::Term intLiteral(const std::string& s) {
  std::string digits = s;
  int base = 10;
  bool negative = false;
  if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
    negative = digits[0] == '-';
    digits.erase(0, 1);
  }
  if (digits.starts_with("0o")) {
    base = 8;
    digits.erase(0, 2);
  } else if (digits.starts_with("0x")) {
    base = 16;
    digits.erase(0, 2);
  }
  long long n = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n, base);
  if (ec != std::errc() || p != digits.data() + digits.size()) {
    // Beyond 64 bits: keep the decimal lexical form.
    auto start = digits.find_first_not_of('0');
    digits = start == std::string::npos ? "0" : digits.substr(start);
    return detail::numberLiteral((negative ? "-" : "") + digits, true);
  }
  return detail::numberLiteral(std::to_string(negative ? -n : n), true);
}

rdf::Term floatLiteral(const std::string& s) {
  std::string lower = s;
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower.ends_with(".nan")) return detail::numberLiteral("NaN", false);
  if (lower.ends_with(".inf")) return detail::numberLiteral(lower[0] == '-' ? "-INF" : "INF", false);
  // Same lexical form a JSON document holding this number would produce.
  return detail::numberLiteral(nlohmann::json(std::stod(s)).dump(), false);
}

std::optional<rdf::Term> scalarLiteral(const YAML::Node& node) {
  const auto& s = node.Scalar();
  switch (scalarKind(node)) {
    case ScalarKind::Null: return std::nullopt;
    case ScalarKind::Bool: return rdf::Term::boolean(s[0] == 't' || s[0] == 'T');
    case ScalarKind::Int: return intLiteral(s);
    case ScalarKind::Float: return floatLiteral(s);
    case ScalarKind::String: break;
  }
  return rdf::Term::literal(s);
}

// Local (non-core) tag name, e.g. "!Point" -> "Point".
std::optional<std::string> customTag(const YAML::Node& node) {
  const auto& tag = node.Tag();
  if (tag.empty() || tag == "?" || tag == "!" || tag.starts_with(kCoreTagPrefix)) return std::nullopt;
  auto name = tag;
  while (!name.empty() && name[0] == '!') name.erase(0, 1);
  if (name.empty()) return std::nullopt;
  return name;
}

bool isNull(const YAML::Node& node) {
  return node.IsNull() || (node.IsScalar() && scalarKind(node) == ScalarKind::Null);
}

void emitNode(FacadeBuilder& out, const rdf::Term& parent, const SlotKey& slot, const YAML::Node& node);

void fillContainer(FacadeBuilder& out, const rdf::Term& container, const YAML::Node& node) {
  if (auto tag = customTag(node)) out.addType(container, out.typeIri(*tag));
  if (node.IsMap()) {
    for (const auto& kv : node) {
      if (!kv.first.IsScalar()) {
        throw Error(ErrorKind::Format, "YAML: complex mapping keys are not supported");
      }
      emitNode(out, container, SlotKey::key(kv.first.Scalar()), kv.second);
    }
  } else {
    for (const auto& item : node) {
      if (isNull(item)) continue;
      emitNode(out, container, SlotKey::next(), item);
    }
  }
}

void emitNode(FacadeBuilder& out, const rdf::Term& parent, const SlotKey& slot, const YAML::Node& node) {
  if (isNull(node)) return;
  if (node.IsMap() || node.IsSequence()) {
    fillContainer(out, out.container(parent, slot), node);
    return;
  }
  if (auto literal = scalarLiteral(node)) out.value(parent, slot, std::move(*literal));
}

}  // namespace

void triplifyYaml(std::string_view text, const config::FacadeOptions&, FacadeBuilder& out) {
  YAML::Node doc;
  try {
    doc = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::Format, std::string("YAML parse error: ") + e.what());
  }
  auto root = out.root();
  if (!doc.IsDefined() || isNull(doc)) return;
  if (doc.IsMap() || doc.IsSequence()) {
    fillContainer(out, root, doc);
  } else if (auto literal = scalarLiteral(doc)) {
    out.value(root, SlotKey::index(1), std::move(*literal));
  }
}

}  // namespace facadex::triplify
