#include <regex>

#include "facadex/util/text.hpp"
#include "internal.hpp"

namespace facadex::triplify {
namespace {

struct Inline {
  enum class Kind { Text, Emphasis, Strong, Code, Link, Image } kind = Kind::Text;
  std::string text;  // Text and Code
  std::string href;  // Link and Image
  std::vector<Inline> children;
};

struct Block {
  enum class Kind { Heading, Paragraph, List, ListItem, Code, Quote, Rule, FrontMatter };
  explicit Block(Kind k) : kind(k) {}

  Kind kind;
  int level = 0;
  bool ordered = false;
  std::string text;  // raw inline source, or literal content for Code/FrontMatter
  std::string info;  // fenced code info string
  std::vector<Block> children;
};

// ---------------------------------------------------------------- inlines

std::size_t findClosing(std::string_view s, std::size_t from, std::string_view marker) {
  for (std::size_t i = from; i + marker.size() <= s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
      continue;
    }
    if (s.compare(i, marker.size(), marker) == 0) {
      if (marker.size() == 1 && i + 1 < s.size() && s[i + 1] == marker[0]) {
        ++i;
        continue;
      }
      return i;
    }
  }
  return std::string_view::npos;
}

std::size_t matchingBracket(std::string_view s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
    } else if (s[i] == '[') {
      ++depth;
    } else if (s[i] == ']' && --depth == 0) {
      return i;
    }
  }
  return std::string_view::npos;
}

std::vector<Inline> parseInlines(std::string_view s) {
  std::vector<Inline> out;
  std::string text;
  auto flush = [&] {
    if (!text.empty()) out.push_back(Inline{Inline::Kind::Text, std::move(text), {}, {}});
    text.clear();
  };
  for (std::size_t i = 0; i < s.size();) {
    char c = s[i];
    if (c == '\\' && i + 1 < s.size() && std::ispunct(static_cast<unsigned char>(s[i + 1]))) {
      text += s[i + 1];
      i += 2;
      continue;
    }
    if (c == '`') {
      std::size_t run = 0;
      while (i + run < s.size() && s[i + run] == '`') ++run;
      std::string fence(run, '`');
      auto close = s.find(fence, i + run);
      if (close != std::string_view::npos) {
        flush();
        std::string code(util::trim(s.substr(i + run, close - i - run)));
        out.push_back(Inline{Inline::Kind::Code, std::move(code), {}, {}});
        i = close + run;
        continue;
      }
      text += fence;
      i += run;
      continue;
    }
    bool image = c == '!' && i + 1 < s.size() && s[i + 1] == '[';
    if (c == '[' || image) {
      std::size_t open = image ? i + 1 : i;
      auto close = matchingBracket(s, open);
      if (close != std::string_view::npos && close + 1 < s.size() && s[close + 1] == '(') {
        auto end = s.find(')', close + 2);
        if (end != std::string_view::npos) {
          flush();
          auto target = util::trim(s.substr(close + 2, end - close - 2));
          if (auto space = target.find(' '); space != std::string_view::npos) {
            target = target.substr(0, space);
          }
          Inline link{image ? Inline::Kind::Image : Inline::Kind::Link, {}, std::string(target), {}};
          link.children = parseInlines(s.substr(open + 1, close - open - 1));
          out.push_back(std::move(link));
          i = end + 1;
          continue;
        }
      }
    }
    if (c == '*' || c == '_') {
      bool strong = i + 1 < s.size() && s[i + 1] == c;
      std::string marker(strong ? 2 : 1, c);
      auto close = findClosing(s, i + marker.size(), marker);
      if (close != std::string_view::npos && close > i + marker.size()) {
        flush();
        Inline em{strong ? Inline::Kind::Strong : Inline::Kind::Emphasis, {}, {}, {}};
        em.children = parseInlines(s.substr(i + marker.size(), close - i - marker.size()));
        out.push_back(std::move(em));
        i = close + marker.size();
        continue;
      }
      text += marker;
      i += marker.size();
      continue;
    }
    text += c;
    ++i;
  }
  flush();
  return out;
}

// ---------------------------------------------------------------- blocks

std::size_t indentOf(std::string_view line) {
  std::size_t n = 0;
  for (char c : line) {
    if (c == ' ') {
      ++n;
    } else if (c == '\t') {
      n += 4 - n % 4;
    } else {
      break;
    }
  }
  return n;
}

bool isBlank(std::string_view line) { return util::trim(line).empty(); }

std::string_view dropIndent(std::string_view line, std::size_t n) {
  std::size_t i = 0;
  while (i < line.size() && i < n && line[i] == ' ') ++i;
  return line.substr(i);
}

struct ListMarker {
  bool ordered = false;
  std::size_t contentIndent = 0;  // column where item content starts
};

std::optional<ListMarker> listMarker(std::string_view line) {
  static const std::regex kBullet(R"(^( {0,3})([-*+])( +|$).*)");
  static const std::regex kOrdered(R"(^( {0,3})([0-9]{1,9}[.)])( +|$).*)");
  std::string s(line);
  std::smatch m;
  if (std::regex_match(s, m, kBullet) || std::regex_match(s, m, kOrdered)) {
    ListMarker marker;
    marker.ordered = std::isdigit(static_cast<unsigned char>(m[2].str()[0]));
    auto spaces = m[3].length();
    marker.contentIndent = static_cast<std::size_t>(m[1].length() + m[2].length() +
                                                    (spaces == 0 || spaces > 4 ? 1 : spaces));
    return marker;
  }
  return std::nullopt;
}

bool isRule(std::string_view line) {
  static const std::regex kRule(R"(^ {0,3}((\* *){3,}|(- *){3,}|(_ *){3,})$)");
  return std::regex_match(std::string(line), kRule);
}

std::optional<std::pair<int, std::string>> atxHeading(std::string_view line) {
  static const std::regex kAtx(R"(^ {0,3}(#{1,6})(?:[ \t]+(.*?))?[ \t]*$)");
  std::string s(line);
  std::smatch m;
  if (!std::regex_match(s, m, kAtx)) return std::nullopt;
  std::string text = m[2].str();
  // Optional closing sequence of '#'.
  static const std::regex kClosing(R"((^|[ \t]+)#+[ \t]*$)");
  text = std::regex_replace(text, kClosing, "");
  return std::make_pair(static_cast<int>(m[1].length()), text);
}

std::optional<std::string> fenceOpen(std::string_view line) {
  auto t = dropIndent(line, 3);
  if (t.starts_with("```") || t.starts_with("~~~")) {
    char c = t[0];
    std::size_t n = 0;
    while (n < t.size() && t[n] == c) ++n;
    return std::string(n, c);
  }
  return std::nullopt;
}

bool startsBlock(std::string_view line) {
  return atxHeading(line) || fenceOpen(line) || isRule(line) || listMarker(line) ||
         dropIndent(line, 3).starts_with(">");
}

std::vector<Block> parseBlocks(const std::vector<std::string_view>& lines);

std::vector<Block> parseBlocks(const std::vector<std::string_view>& lines) {
  std::vector<Block> blocks;
  std::size_t i = 0;
  while (i < lines.size()) {
    auto line = lines[i];
    if (isBlank(line)) {
      ++i;
      continue;
    }
    if (auto fence = fenceOpen(line)) {
      Block code{Block::Kind::Code};
      code.info = std::string(util::trim(dropIndent(line, 3).substr(fence->size())));
      std::size_t indent = indentOf(line);
      std::string body;
      ++i;
      while (i < lines.size() && !util::trim(lines[i]).starts_with(*fence)) {
        body += std::string(dropIndent(lines[i], indent)) + "\n";
        ++i;
      }
      if (i < lines.size()) ++i;
      code.text = std::move(body);
      blocks.push_back(std::move(code));
      continue;
    }
    if (auto heading = atxHeading(line)) {
      Block h{Block::Kind::Heading};
      h.level = heading->first;
      h.text = heading->second;
      blocks.push_back(std::move(h));
      ++i;
      continue;
    }
    if (isRule(line)) {
      blocks.push_back(Block{Block::Kind::Rule});
      ++i;
      continue;
    }
    if (dropIndent(line, 3).starts_with(">")) {
      std::vector<std::string_view> inner;
      while (i < lines.size() && dropIndent(lines[i], 3).starts_with(">")) {
        auto rest = dropIndent(lines[i], 3).substr(1);
        if (rest.starts_with(" ")) rest.remove_prefix(1);
        inner.push_back(rest);
        ++i;
      }
      Block quote{Block::Kind::Quote};
      quote.children = parseBlocks(inner);
      blocks.push_back(std::move(quote));
      continue;
    }
    if (auto marker = listMarker(line)) {
      Block list{Block::Kind::List};
      list.ordered = marker->ordered;
      while (i < lines.size()) {
        auto m = listMarker(lines[i]);
        if (!m || m->ordered != list.ordered) break;
        std::vector<std::string_view> itemLines;
        auto first = lines[i];
        itemLines.push_back(first.size() > m->contentIndent ? first.substr(m->contentIndent) : "");
        ++i;
        while (i < lines.size()) {
          if (isBlank(lines[i])) {
            // Blank lines belong to the item only when indented content follows.
            std::size_t j = i;
            while (j < lines.size() && isBlank(lines[j])) ++j;
            if (j < lines.size() && indentOf(lines[j]) >= m->contentIndent) {
              for (; i < j; ++i) itemLines.push_back("");
              continue;
            }
            break;
          }
          if (indentOf(lines[i]) >= m->contentIndent) {
            itemLines.push_back(dropIndent(lines[i], m->contentIndent));
          } else if (!startsBlock(lines[i]) && !itemLines.empty() && !isBlank(itemLines.back())) {
            itemLines.push_back(lines[i]);  // lazy continuation
          } else {
            break;
          }
          ++i;
        }
        Block item{Block::Kind::ListItem};
        item.children = parseBlocks(itemLines);
        list.children.push_back(std::move(item));
        while (i < lines.size() && isBlank(lines[i])) {
          std::size_t j = i;
          while (j < lines.size() && isBlank(lines[j])) ++j;
          if (j < lines.size() && listMarker(lines[j])) {
            i = j;
          } else {
            break;
          }
        }
      }
      blocks.push_back(std::move(list));
      continue;
    }
    Block para{Block::Kind::Paragraph};
    std::string text(util::trim(line));
    ++i;
    while (i < lines.size() && !isBlank(lines[i]) && !startsBlock(lines[i])) {
      text += "\n";
      text += util::trim(lines[i]);
      ++i;
    }
    para.text = std::move(text);
    blocks.push_back(std::move(para));
  }
  return blocks;
}

// ---------------------------------------------------------------- emission

void emitInlines(FacadeBuilder& out, const rdf::Term& container, const std::vector<Inline>& inlines);

void emitInline(FacadeBuilder& out, const rdf::Term& container, const Inline& in) {
  if (in.kind == Inline::Kind::Text) {
    out.appendValue(container, rdf::Term::literal(in.text));
    return;
  }
  auto node = out.appendContainer(container);
  switch (in.kind) {
    case Inline::Kind::Emphasis: out.addType(node, out.typeIri("Emphasis")); break;
    case Inline::Kind::Strong: out.addType(node, out.typeIri("StrongEmphasis")); break;
    case Inline::Kind::Code:
      out.addType(node, out.typeIri("InlineCode"));
      out.appendValue(node, rdf::Term::literal(in.text));
      return;
    case Inline::Kind::Link:
    case Inline::Kind::Image:
      out.addType(node, out.typeIri(in.kind == Inline::Kind::Link ? "Link" : "Image"));
      out.value(node, SlotKey::key("link"), rdf::Term::literal(in.href));
      break;
    case Inline::Kind::Text: break;
  }
  emitInlines(out, node, in.children);
}

void emitInlines(FacadeBuilder& out, const rdf::Term& container, const std::vector<Inline>& inlines) {
  for (const auto& in : inlines) emitInline(out, container, in);
}

void emitBlocks(FacadeBuilder& out, const rdf::Term& container, const std::vector<Block>& blocks,
                bool tight);

void emitBlock(FacadeBuilder& out, const rdf::Term& container, const Block& b) {
  auto node = out.appendContainer(container);
  switch (b.kind) {
    case Block::Kind::Heading:
      out.addType(node, out.typeIri("Heading"));
      out.value(node, SlotKey::key("level"), detail::numberLiteral(std::to_string(b.level), true));
      emitInlines(out, node, parseInlines(b.text));
      break;
    case Block::Kind::Paragraph:
      out.addType(node, out.typeIri("Paragraph"));
      emitInlines(out, node, parseInlines(b.text));
      break;
    case Block::Kind::List:
      out.addType(node, out.typeIri("List"));
      out.value(node, SlotKey::key("listType"),
                rdf::Term::literal(b.ordered ? "ordered" : "bullet"));
      emitBlocks(out, node, b.children, false);
      break;
    case Block::Kind::ListItem:
      out.addType(node, out.typeIri("ListItem"));
      emitBlocks(out, node, b.children, true);
      break;
    case Block::Kind::Code:
      out.addType(node, out.typeIri("Code"));
      if (!b.info.empty()) out.value(node, SlotKey::key("info"), rdf::Term::literal(b.info));
      out.appendValue(node, rdf::Term::literal(b.text));
      break;
    case Block::Kind::Quote:
      out.addType(node, out.typeIri("BlockQuote"));
      emitBlocks(out, node, b.children, false);
      break;
    case Block::Kind::Rule:
      out.addType(node, out.typeIri("ThematicBreak"));
      break;
    case Block::Kind::FrontMatter:
      out.addType(node, out.typeIri("FrontMatter"));
      out.appendValue(node, rdf::Term::literal(b.text));
      break;
  }
}

// In a tight list item a paragraph's inlines sit directly in the item.
void emitBlocks(FacadeBuilder& out, const rdf::Term& container, const std::vector<Block>& blocks,
                bool tight) {
  for (const auto& b : blocks) {
    if (tight && b.kind == Block::Kind::Paragraph) {
      emitInlines(out, container, parseInlines(b.text));
    } else {
      emitBlock(out, container, b);
    }
  }
}

}  // namespace

void triplifyMarkdown(std::string_view text, const config::FacadeOptions&, FacadeBuilder& out) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start <= text.size();) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (line.ends_with('\r')) line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();

  std::vector<Block> blocks;
  std::size_t bodyStart = 0;
  if (!lines.empty() && lines[0] == "---") {
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (lines[i] == "---" || lines[i] == "...") {
        Block fm{Block::Kind::FrontMatter};
        for (std::size_t j = 1; j < i; ++j) fm.text += std::string(lines[j]) + "\n";
        blocks.push_back(std::move(fm));
        bodyStart = i + 1;
        break;
      }
    }
  }
  auto body = parseBlocks({lines.begin() + static_cast<std::ptrdiff_t>(bodyStart), lines.end()});
  blocks.insert(blocks.end(), std::make_move_iterator(body.begin()),
                std::make_move_iterator(body.end()));

  const auto& root = out.root();
  out.addType(root, out.typeIri("Document"));
  emitBlocks(out, root, blocks, false);
}

}  // namespace facadex::triplify
