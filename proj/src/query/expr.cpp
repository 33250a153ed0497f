#include "expr.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <random>
#include <regex>
#include <set>
#include <unordered_map>

#include "facadex/error.hpp"
#include "facadex/util/text.hpp"

namespace facadex::query::detail {
namespace {

struct EvalError {};

[[noreturn]] void raise() { throw EvalError{}; }

std::string xsd(std::string_view local) { return std::string(vocab::kXsd) + std::string(local); }

// ---------------------------------------------------------------- numbers

enum class NumType { Integer = 0, Decimal = 1, Float = 2, Double = 3 };

struct Num {
  NumType type = NumType::Integer;
  std::int64_t i = 0;
  double d = 0;

  double asDouble() const { return type == NumType::Integer ? static_cast<double>(i) : d; }
};

const std::set<std::string>& integerTypes() {
  static const std::set<std::string> kTypes{
      xsd("integer"), xsd("int"), xsd("long"), xsd("short"), xsd("byte"),
      xsd("nonNegativeInteger"), xsd("positiveInteger"), xsd("negativeInteger"),
      xsd("nonPositiveInteger"), xsd("unsignedInt"), xsd("unsignedLong"), xsd("unsignedShort"),
      xsd("unsignedByte")};
  return kTypes;
}

std::optional<NumType> numericType(const rdf::Term& t) {
  if (!t.isLiteral()) return std::nullopt;
  const auto& dt = t.datatype();
  if (integerTypes().contains(dt)) return NumType::Integer;
  if (dt == vocab::kXsdDecimal) return NumType::Decimal;
  if (dt == vocab::kXsdFloat) return NumType::Float;
  if (dt == vocab::kXsdDouble) return NumType::Double;
  return std::nullopt;
}

std::optional<double> parseDouble(std::string_view s) {
  s = util::trim(s);
  if (s == "INF" || s == "+INF") return HUGE_VAL;
  if (s == "-INF") return -HUGE_VAL;
  if (s == "NaN") return std::nan("");
  if (s.empty()) return std::nullopt;
  std::string buf(s);
  if (buf[0] == '+') buf.erase(0, 1);
  double v = 0;
  auto [p, ec] = std::from_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc() || p != buf.data() + buf.size()) return std::nullopt;
  return v;
}

std::optional<std::int64_t> parseInteger(std::string_view s) {
  s = util::trim(s);
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<Num> toNum(const rdf::Term& t) {
  auto type = numericType(t);
  if (!type) return std::nullopt;
  Num n;
  n.type = *type;
  if (*type == NumType::Integer) {
    auto v = parseInteger(t.value());
    if (v) {
      n.i = *v;
      return n;
    }
    // Beyond 64 bits: carry on as a decimal.
    auto d = parseDouble(t.value());
    if (!d) return std::nullopt;
    n.type = NumType::Decimal;
    n.d = *d;
    return n;
  }
  auto d = parseDouble(t.value());
  if (!d) return std::nullopt;
  if (*type == NumType::Decimal && !std::isfinite(*d)) return std::nullopt;
  n.d = *d;
  return n;
}

std::string formatDecimal(double d) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d, std::chars_format::fixed);
  std::string s(buf, ec == std::errc() ? p : buf);
  if (s.find('.') == std::string::npos) s += ".0";
  return s;
}

std::string formatDouble(double d) {
  if (std::isnan(d)) return "NaN";
  if (std::isinf(d)) return d > 0 ? "INF" : "-INF";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d, std::chars_format::scientific);
  std::string s(buf, ec == std::errc() ? p : buf);
  auto e = s.find('e');
  std::string mantissa = s.substr(0, e);
  if (mantissa.find('.') == std::string::npos) mantissa += ".0";
  int exponent = std::stoi(s.substr(e + 1));
  return mantissa + "E" + std::to_string(exponent);
}

rdf::Term fromNum(const Num& n) {
  switch (n.type) {
    case NumType::Integer: return rdf::Term::literal(std::to_string(n.i), std::string(vocab::kXsdInteger));
    case NumType::Decimal: return rdf::Term::literal(formatDecimal(n.d), std::string(vocab::kXsdDecimal));
    case NumType::Float: return rdf::Term::literal(formatDouble(static_cast<float>(n.d)), std::string(vocab::kXsdFloat));
    case NumType::Double: return rdf::Term::literal(formatDouble(n.d), std::string(vocab::kXsdDouble));
  }
  raise();
}

Num arithmetic(char op, const Num& a, const Num& b) {
  auto type = std::max(a.type, b.type);
  if (op == '/' && type == NumType::Integer) type = NumType::Decimal;
  Num r;
  r.type = type;
  if (type == NumType::Integer) {
    std::int64_t out = 0;
    bool overflow = false;
    switch (op) {
      case '+': overflow = __builtin_add_overflow(a.i, b.i, &out); break;
      case '-': overflow = __builtin_sub_overflow(a.i, b.i, &out); break;
      case '*': overflow = __builtin_mul_overflow(a.i, b.i, &out); break;
    }
    if (!overflow) {
      r.i = out;
      return r;
    }
    r.type = NumType::Decimal;
  }
  double x = a.asDouble();
  double y = b.asDouble();
  if (op == '/' && y == 0 && r.type == NumType::Decimal) raise();
  switch (op) {
    case '+': r.d = x + y; break;
    case '-': r.d = x - y; break;
    case '*': r.d = x * y; break;
    case '/': r.d = x / y; break;
  }
  return r;
}

// -1, 0, 1, or nullopt for NaN.
std::optional<int> compareNum(const Num& a, const Num& b) {
  if (a.type == NumType::Integer && b.type == NumType::Integer) return (a.i > b.i) - (a.i < b.i);
  double x = a.asDouble();
  double y = b.asDouble();
  if (std::isnan(x) || std::isnan(y)) return std::nullopt;
  return (x > y) - (x < y);
}

// ---------------------------------------------------------------- strings

bool isStringLiteral(const rdf::Term& t) {
  return t.isLiteral() && (t.datatype() == vocab::kXsdString || t.hasLanguage());
}

const rdf::Term& requireString(const rdf::Term& t) {
  if (!isStringLiteral(t)) raise();
  return t;
}

// Result literal that keeps the language tag of `like`.
rdf::Term stringLike(std::string value, const rdf::Term& like) {
  if (like.hasLanguage()) return rdf::Term::langLiteral(std::move(value), like.language());
  return rdf::Term::literal(std::move(value));
}

// Argument compatibility for STRSTARTS and friends.
void requireCompatible(const rdf::Term& a, const rdf::Term& b) {
  requireString(a);
  requireString(b);
  if (b.hasLanguage() && a.language() != b.language()) raise();
}

std::u32string toCodepoints(std::string_view s) {
  std::u32string out;
  for (std::size_t i = 0; i < s.size();) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 6 ? 2 : (c >> 4) == 14 ? 3 : (c >> 3) == 30 ? 4 : 1;
    char32_t cp = len == 1 ? c : c & (0xFF >> (len + 1));
    for (std::size_t k = 1; k < len && i + k < s.size(); ++k) {
      cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    }
    out += cp;
    i += len;
  }
  return out;
}

std::string fromCodepoints(std::u32string_view cps) {
  std::string out;
  for (char32_t c : cps) out += util::encodeUtf8(static_cast<std::uint32_t>(c));
  return out;
}

std::string asciiCase(std::string s, bool upper) {
  for (auto& c : s) {
    c = static_cast<char>(upper ? std::toupper(static_cast<unsigned char>(c))
                                : std::tolower(static_cast<unsigned char>(c)));
  }
  return s;
}

const std::regex& compileRegex(const std::string& pattern, const std::string& flags) {
  thread_local std::unordered_map<std::string, std::regex> cache;
  auto key = flags + '\0' + pattern;
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto options = std::regex::ECMAScript;
  std::string source = pattern;
  for (char f : flags) {
    if (f == 'i') {
      options |= std::regex::icase;
    } else if (f == 'q') {
      std::string quoted;
      for (char c : source) {
        if (std::strchr("\\^$.|?*+()[]{}", c)) quoted += '\\';
        quoted += c;
      }
      source = std::move(quoted);
    } else if (f != 's' && f != 'm' && f != 'x') {
      raise();
    }
  }
  try {
    if (cache.size() > 256) cache.clear();
    return cache.emplace(key, std::regex(source, options)).first->second;
  } catch (const std::regex_error&) {
    raise();
  }
}

std::string hashHex(const EVP_MD* md, std::string_view data) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), out, &len, md, nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[out[i] >> 4];
    hex += kHex[out[i] & 0xF];
  }
  return hex;
}

// ---------------------------------------------------------------- comparison

bool isBooleanLiteral(const rdf::Term& t) {
  return t.isLiteral() && t.datatype() == vocab::kXsdBoolean;
}

std::optional<bool> booleanValue(const rdf::Term& t) {
  if (t.value() == "true" || t.value() == "1") return true;
  if (t.value() == "false" || t.value() == "0") return false;
  return std::nullopt;
}

// Value comparison for the relational operators; nullopt when the operands
// are not comparable.
std::optional<int> compareValues(const rdf::Term& a, const rdf::Term& b) {
  if (auto x = toNum(a)) {
    if (auto y = toNum(b)) return compareNum(*x, *y);
    return std::nullopt;
  }
  if (a.isPlainString() && b.isPlainString()) {
    return a.value() == b.value() ? 0 : (a.value() < b.value() ? -1 : 1);
  }
  if (a.hasLanguage() && b.hasLanguage() && a.language() == b.language()) {
    return a.value() == b.value() ? 0 : (a.value() < b.value() ? -1 : 1);
  }
  if (isBooleanLiteral(a) && isBooleanLiteral(b)) {
    auto x = booleanValue(a);
    auto y = booleanValue(b);
    if (!x || !y) return std::nullopt;
    return static_cast<int>(*x) - static_cast<int>(*y);
  }
  if (a.isLiteral() && b.isLiteral() && a.datatype() == vocab::kXsdDateTime &&
      b.datatype() == vocab::kXsdDateTime) {
    return a.value() == b.value() ? 0 : (a.value() < b.value() ? -1 : 1);
  }
  return std::nullopt;
}

bool knownDatatype(const rdf::Term& t) {
  return numericType(t) || t.isPlainString() || t.hasLanguage() || isBooleanLiteral(t) ||
         t.datatype() == vocab::kXsdDateTime;
}

bool rdfEquals(const rdf::Term& a, const rdf::Term& b) {
  if (auto c = compareValues(a, b)) return *c == 0;
  if (a == b) return true;
  // Two literals of unknown datatypes cannot be proven different.
  if (a.isLiteral() && b.isLiteral() && !(knownDatatype(a) && knownDatatype(b))) {
    if (a.datatype() == b.datatype() && !knownDatatype(a)) return false;
    raise();
  }
  return false;
}

std::optional<bool> effectiveBoolean(const rdf::Term& t) {
  if (!t.isLiteral()) return std::nullopt;
  if (isBooleanLiteral(t)) return booleanValue(t);
  if (isStringLiteral(t)) return !t.value().empty();
  if (numericType(t)) {
    auto n = toNum(t);
    if (!n) return false;
    if (n->type == NumType::Integer) return n->i != 0;
    return n->d != 0 && !std::isnan(n->d);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- casts

rdf::Term castTo(const std::string& type, const rdf::Term& v) {
  if (v.isBlank()) raise();
  if (type == vocab::kXsdString) return rdf::Term::literal(v.value());
  if (v.isIri()) raise();
  auto num = toNum(v);
  if (integerTypes().contains(type)) {
    std::int64_t n = 0;
    if (num) {
      if (num->type == NumType::Integer) {
        n = num->i;
      } else {
        if (!std::isfinite(num->d)) raise();
        n = static_cast<std::int64_t>(std::trunc(num->d));
      }
    } else if (isBooleanLiteral(v)) {
      auto b = booleanValue(v);
      if (!b) raise();
      n = *b ? 1 : 0;
    } else if (auto parsed = parseInteger(v.value())) {
      n = *parsed;
    } else {
      raise();
    }
    if (type == vocab::kXsdInt && (n < INT32_MIN || n > INT32_MAX)) raise();
    return rdf::Term::literal(std::to_string(n), type);
  }
  if (type == vocab::kXsdDecimal || type == vocab::kXsdDouble || type == vocab::kXsdFloat) {
    double d = 0;
    if (num) {
      d = num->asDouble();
    } else if (isBooleanLiteral(v)) {
      auto b = booleanValue(v);
      if (!b) raise();
      d = *b ? 1 : 0;
    } else if (auto parsed = parseDouble(v.value())) {
      d = *parsed;
    } else {
      raise();
    }
    Num out;
    out.d = d;
    out.type = type == vocab::kXsdDecimal ? NumType::Decimal
               : type == vocab::kXsdFloat ? NumType::Float
                                           : NumType::Double;
    if (out.type == NumType::Decimal && !std::isfinite(d)) raise();
    return fromNum(out);
  }
  if (type == vocab::kXsdBoolean) {
    if (num) {
      return rdf::Term::boolean(num->type == NumType::Integer ? num->i != 0 : (num->d != 0 && !std::isnan(num->d)));
    }
    auto b = booleanValue(v);
    if (!b) raise();
    return rdf::Term::boolean(*b);
  }
  if (type == vocab::kXsdDateTime) {
    static const std::regex kDateTime(
        R"(-?[0-9]{4,}-[0-9]{2}-[0-9]{2}T[0-9]{2}:[0-9]{2}:[0-9]{2}(\.[0-9]+)?(Z|[+-][0-9]{2}:[0-9]{2})?)");
    if (!std::regex_match(v.value(), kDateTime)) raise();
    return rdf::Term::literal(v.value(), type);
  }
  raise();
}

bool isCastType(const std::string& iri) {
  return iri == vocab::kXsdString || integerTypes().contains(iri) || iri == vocab::kXsdDecimal ||
         iri == vocab::kXsdDouble || iri == vocab::kXsdFloat || iri == vocab::kXsdBoolean ||
         iri == vocab::kXsdDateTime;
}

// Component of an xsd:dateTime lexical form.
rdf::Term dateTimePart(const rdf::Term& t, const std::string& fn) {
  if (!t.isLiteral() || t.datatype() != vocab::kXsdDateTime) raise();
  static const std::regex kParts(
      R"((-?[0-9]{4,})-([0-9]{2})-([0-9]{2})T([0-9]{2}):([0-9]{2}):([0-9]{2}(?:\.[0-9]+)?).*)");
  std::smatch m;
  const auto& s = t.value();
  if (!std::regex_match(s, m, kParts)) raise();
  auto integer = [](const std::string& v) {
    return rdf::Term::literal(std::to_string(std::stoll(v)), std::string(vocab::kXsdInteger));
  };
  if (fn == "YEAR") return integer(m[1]);
  if (fn == "MONTH") return integer(m[2]);
  if (fn == "DAY") return integer(m[3]);
  if (fn == "HOURS") return integer(m[4]);
  if (fn == "MINUTES") return integer(m[5]);
  return rdf::Term::literal(m[6].str().find('.') == std::string::npos ? m[6].str() + ".0" : m[6].str(),
                            std::string(vocab::kXsdDecimal));
}

}  // namespace

// ---------------------------------------------------------------- evaluator

std::optional<rdf::Term> ExprEvaluator::eval(const Expr& e, const Solution& row) const {
  try {
    return evalOrThrow(e, row);
  } catch (const EvalError&) {
    return std::nullopt;
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::Timeout) throw;
    return std::nullopt;
  }
}

std::optional<bool> ExprEvaluator::test(const Expr& e, const Solution& row) const {
  auto v = eval(e, row);
  if (!v) return std::nullopt;
  return effectiveBoolean(*v);
}

rdf::Term ExprEvaluator::evalOrThrow(const Expr& e, const Solution& row) const {
  switch (e.kind) {
    case Expr::Kind::Constant: return e.constant;
    case Expr::Kind::Variable: {
      auto it = row.find(e.name);
      if (it == row.end()) raise();
      return it->second;
    }
    case Expr::Kind::Function: return call(e, row);
  }
  raise();
}

rdf::Term ExprEvaluator::call(const Expr& e, const Solution& row) const {
  const auto& name = e.name;
  const auto& args = e.args;
  auto arg = [&](std::size_t i) { return evalOrThrow(args.at(i), row); };
  auto ebv = [&](std::size_t i) {
    auto b = effectiveBoolean(arg(i));
    if (!b) raise();
    return *b;
  };
  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) raise();
  };

  // Operators and special forms with non-strict argument evaluation.
  if (name == "||" || name == "&&") {
    bool isOr = name == "||";
    std::optional<bool> left;
    std::optional<bool> right;
    try {
      left = ebv(0);
    } catch (const EvalError&) {
    }
    if (left && *left == isOr) return rdf::Term::boolean(isOr);
    try {
      right = ebv(1);
    } catch (const EvalError&) {
    }
    if (right && *right == isOr) return rdf::Term::boolean(isOr);
    if (!left || !right) raise();
    return rdf::Term::boolean(!isOr);
  }
  if (name == "!") return rdf::Term::boolean(!ebv(0));
  if (name == "BOUND") {
    if (args.size() != 1 || args[0].kind != Expr::Kind::Variable) raise();
    return rdf::Term::boolean(row.contains(args[0].name));
  }
  if (name == "IF") {
    arity(3, 3);
    return ebv(0) ? arg(1) : arg(2);
  }
  if (name == "COALESCE") {
    for (const auto& a : args) {
      try {
        return evalOrThrow(a, row);
      } catch (const EvalError&) {
      }
    }
    raise();
  }
  if (name == "IN" || name == "NOT IN") {
    auto lhs = arg(0);
    bool error = false;
    for (std::size_t i = 1; i < args.size(); ++i) {
      try {
        if (rdfEquals(lhs, arg(i))) return rdf::Term::boolean(name == "IN");
      } catch (const EvalError&) {
        error = true;
      }
    }
    if (error) raise();
    return rdf::Term::boolean(name != "IN");
  }

  if (name == "=" || name == "!=") {
    bool eq = rdfEquals(arg(0), arg(1));
    return rdf::Term::boolean(name == "=" ? eq : !eq);
  }
  if (name == "<" || name == ">" || name == "<=" || name == ">=") {
    auto c = compareValues(arg(0), arg(1));
    if (!c) raise();
    bool r = name == "<" ? *c < 0 : name == ">" ? *c > 0 : name == "<=" ? *c <= 0 : *c >= 0;
    return rdf::Term::boolean(r);
  }
  if (name == "+" || name == "-" || name == "*" || name == "/") {
    auto a = toNum(arg(0));
    auto b = toNum(arg(1));
    if (!a || !b) raise();
    return fromNum(arithmetic(name[0], *a, *b));
  }
  if (name == "NEG" || name == "UPLUS") {
    auto a = toNum(arg(0));
    if (!a) raise();
    if (name == "NEG") {
      if (a->type == NumType::Integer) {
        if (a->i == INT64_MIN) raise();
        a->i = -a->i;
      } else {
        a->d = -a->d;
      }
    }
    return fromNum(*a);
  }

  // Builtins with strict argument evaluation.
  if (name == "STR") {
    auto v = arg(0);
    if (v.isBlank()) raise();
    return rdf::Term::literal(v.value());
  }
  if (name == "LANG") {
    auto v = arg(0);
    if (!v.isLiteral()) raise();
    return rdf::Term::literal(v.language());
  }
  if (name == "DATATYPE") {
    auto v = arg(0);
    if (!v.isLiteral()) raise();
    return rdf::Term::iri(v.datatype());
  }
  if (name == "LANGMATCHES") {
    auto tag = util::toLower(requireString(arg(0)).value());
    auto range = util::toLower(requireString(arg(1)).value());
    if (range == "*") return rdf::Term::boolean(!tag.empty());
    return rdf::Term::boolean(tag == range || tag.starts_with(range + "-"));
  }
  if (name == "IRI") {
    auto v = arg(0);
    if (v.isIri()) return v;
    if (!v.isPlainString() || !rdf::hasScheme(v.value())) raise();
    return rdf::Term::iri(v.value());
  }
  if (name == "BNODE") {
    arity(0, 1);
    if (args.size() == 1) requireString(arg(0));
    return rdf::Term::blank("fn" + std::to_string(++bnodeCounter_));
  }
  if (name == "RAND") {
    thread_local std::mt19937_64 rng{std::random_device{}()};
    Num n;
    n.type = NumType::Double;
    n.d = std::uniform_real_distribution<double>(0, 1)(rng);
    return fromNum(n);
  }
  if (name == "NOW") {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return rdf::Term::literal(buf, std::string(vocab::kXsdDateTime));
  }
  if (name == "ABS" || name == "CEIL" || name == "FLOOR" || name == "ROUND") {
    auto n = toNum(arg(0));
    if (!n) raise();
    if (n->type == NumType::Integer) {
      if (name == "ABS" && n->i == INT64_MIN) raise();
      if (name == "ABS") n->i = std::llabs(n->i);
      return fromNum(*n);
    }
    if (name == "ABS") n->d = std::fabs(n->d);
    if (name == "CEIL") n->d = std::ceil(n->d);
    if (name == "FLOOR") n->d = std::floor(n->d);
    if (name == "ROUND") n->d = std::floor(n->d + 0.5);
    return fromNum(*n);
  }
  if (name == "CONCAT") {
    std::string out;
    std::optional<std::string> lang;
    bool first = true;
    for (std::size_t i = 0; i < args.size(); ++i) {
      auto v = requireString(arg(i));
      out += v.value();
      if (first) {
        lang = v.language();
        first = false;
      } else if (lang && *lang != v.language()) {
        lang.reset();
      }
    }
    if (lang && !lang->empty()) return rdf::Term::langLiteral(out, *lang);
    return rdf::Term::literal(out);
  }
  if (name == "STRLEN") {
    auto v = requireString(arg(0));
    return rdf::Term::integer(static_cast<std::int64_t>(toCodepoints(v.value()).size()));
  }
  if (name == "SUBSTR") {
    arity(2, 3);
    auto v = requireString(arg(0));
    auto start = toNum(arg(1));
    if (!start) raise();
    auto cps = toCodepoints(v.value());
    // 1-based positions; characters at p with start <= p < start + length.
    double from = std::round(start->asDouble());
    double to = HUGE_VAL;
    if (args.size() == 3) {
      auto len = toNum(arg(2));
      if (!len) raise();
      to = from + std::round(len->asDouble());
    }
    std::u32string out;
    for (std::size_t p = 1; p <= cps.size(); ++p) {
      auto pos = static_cast<double>(p);
      if (pos >= from && pos < to) out += cps[p - 1];
    }
    return stringLike(fromCodepoints(out), v);
  }
  if (name == "UCASE" || name == "LCASE") {
    auto v = requireString(arg(0));
    return stringLike(asciiCase(v.value(), name == "UCASE"), v);
  }
  if (name == "ENCODE_FOR_URI") {
    auto v = requireString(arg(0));
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : v.value()) {
      if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
        out += static_cast<char>(c);
      } else {
        out += '%';
        out += kHex[c >> 4];
        out += kHex[c & 0xF];
      }
    }
    return rdf::Term::literal(out);
  }
  if (name == "CONTAINS" || name == "STRSTARTS" || name == "STRENDS") {
    auto a = arg(0);
    auto b = arg(1);
    requireCompatible(a, b);
    const auto& x = a.value();
    const auto& y = b.value();
    bool r = name == "CONTAINS" ? x.find(y) != std::string::npos
             : name == "STRSTARTS" ? x.starts_with(y)
                                   : x.ends_with(y);
    return rdf::Term::boolean(r);
  }
  if (name == "STRBEFORE" || name == "STRAFTER") {
    auto a = arg(0);
    auto b = arg(1);
    requireCompatible(a, b);
    auto at = a.value().find(b.value());
    if (at == std::string::npos) return rdf::Term::literal("");
    auto part = name == "STRBEFORE" ? a.value().substr(0, at) : a.value().substr(at + b.value().size());
    return stringLike(part, a);
  }
  if (name == "MD5" || name == "SHA1" || name == "SHA256" || name == "SHA512") {
    auto v = arg(0);
    if (!v.isPlainString()) raise();
    const EVP_MD* md = name == "MD5" ? EVP_md5() : name == "SHA1" ? EVP_sha1()
                       : name == "SHA256" ? EVP_sha256() : EVP_sha512();
    return rdf::Term::literal(hashHex(md, v.value()));
  }
  if (name == "YEAR" || name == "MONTH" || name == "DAY" || name == "HOURS" || name == "MINUTES" ||
      name == "SECONDS") {
    return dateTimePart(arg(0), name);
  }
  if (name == "STRLANG") {
    auto v = arg(0);
    auto lang = arg(1);
    if (!v.isPlainString() || !lang.isPlainString() || lang.value().empty()) raise();
    return rdf::Term::langLiteral(v.value(), lang.value());
  }
  if (name == "STRDT") {
    auto v = arg(0);
    auto dt = arg(1);
    if (!v.isPlainString() || !dt.isIri()) raise();
    return rdf::Term::literal(v.value(), dt.value());
  }
  if (name == "SAMETERM") return rdf::Term::boolean(arg(0) == arg(1));
  if (name == "ISIRI") return rdf::Term::boolean(arg(0).isIri());
  if (name == "ISBLANK") return rdf::Term::boolean(arg(0).isBlank());
  if (name == "ISLITERAL") return rdf::Term::boolean(arg(0).isLiteral());
  if (name == "ISNUMERIC") return rdf::Term::boolean(toNum(arg(0)).has_value());
  if (name == "REGEX") {
    arity(2, 3);
    auto text = requireString(arg(0));
    auto pattern = arg(1);
    if (!pattern.isPlainString()) raise();
    std::string flags = args.size() == 3 ? arg(2).value() : "";
    return rdf::Term::boolean(std::regex_search(text.value(), compileRegex(pattern.value(), flags)));
  }
  if (name == "REPLACE") {
    arity(3, 4);
    auto text = requireString(arg(0));
    auto pattern = arg(1);
    auto replacement = arg(2);
    if (!pattern.isPlainString() || !replacement.isPlainString()) raise();
    std::string flags = args.size() == 4 ? arg(3).value() : "";
    const auto& re = compileRegex(pattern.value(), flags);
    return stringLike(std::regex_replace(text.value(), re, replacement.value()), text);
  }

  if (isCastType(name)) {
    arity(1, 1);
    return castTo(name, arg(0));
  }
  if (const auto* fn = registry_.function(name)) {
    std::vector<rdf::Term> values;
    values.reserve(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) values.push_back(arg(i));
    return (*fn)(values);
  }
  raise();
}

int compareForOrder(const std::optional<rdf::Term>& a, const std::optional<rdf::Term>& b) {
  if (!a || !b) return static_cast<int>(a.has_value()) - static_cast<int>(b.has_value());
  auto rank = [](const rdf::Term& t) {
    return t.isBlank() ? 0 : t.isIri() ? 1 : 2;
  };
  if (rank(*a) != rank(*b)) return rank(*a) - rank(*b);
  if (a->isLiteral()) {
    if (auto c = compareValues(*a, *b)) {
      if (*c != 0) return *c;
    }
  }
  if (a->value() != b->value()) return a->value() < b->value() ? -1 : 1;
  if (a->datatype() != b->datatype()) return a->datatype() < b->datatype() ? -1 : 1;
  if (a->language() != b->language()) return a->language() < b->language() ? -1 : 1;
  return 0;
}

}  // namespace facadex::query::detail
