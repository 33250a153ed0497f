#include <regex>

#include "facadex/error.hpp"
#include "facadex/util/text.hpp"
#include "internal.hpp"

namespace facadex::triplify {

void triplifyText(std::string_view text, const config::FacadeOptions& options, FacadeBuilder& out) {
  auto root = out.root();
  auto split = options.get(config::opt::kTxtSplit);
  auto pattern = options.get(config::opt::kTxtRegex);
  if (split && pattern) {
    throw Error(ErrorKind::Config, "txt.split and txt.regex cannot be combined");
  }
  if (split) {
    if (split->empty()) throw Error(ErrorKind::Config, "txt.split must not be empty");
    std::size_t start = 0;
    while (true) {
      auto end = text.find(*split, start);
      auto token = text.substr(start, end == std::string_view::npos ? end : end - start);
      out.appendValue(root, rdf::Term::literal(std::string(token)));
      if (end == std::string_view::npos) break;
      start = end + split->size();
    }
    return;
  }
  if (pattern) {
    std::regex re;
    try {
      re = std::regex(*pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      throw Error(ErrorKind::Config, "invalid txt.regex '" + *pattern + "': " + e.what());
    }
    for (auto it = std::cregex_iterator(text.data(), text.data() + text.size(), re);
         it != std::cregex_iterator(); ++it) {
      const auto& m = *it;
      if (m.size() <= 1) {
        out.appendValue(root, rdf::Term::literal(m.str()));
        continue;
      }
      auto match = out.appendContainer(root);
      for (std::size_t g = 1; g < m.size(); ++g) {
        // Unmatched optional groups keep their slot number free.
        if (!m[g].matched) continue;
        out.value(match, SlotKey::index(static_cast<std::int64_t>(g)), rdf::Term::literal(m[g].str()));
      }
    }
    return;
  }
  out.value(root, SlotKey::index(1), rdf::Term::literal(std::string(text)));
}

void triplifyBinary(std::string_view bytes, const config::FacadeOptions&, FacadeBuilder& out) {
  auto root = out.root();
  out.value(root, SlotKey::index(1),
            rdf::Term::literal(util::base64Encode(bytes), std::string(vocab::kXsdBase64)));
}

}  // namespace facadex::triplify
