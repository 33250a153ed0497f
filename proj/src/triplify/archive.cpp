#include <algorithm>
#include <cstring>
#include <filesystem>
#include <map>

#include "facadex/error.hpp"
#include "internal.hpp"

namespace facadex::triplify {
namespace {

namespace fs = std::filesystem;

// Entry tree of a directory or archive. std::map keeps names sorted.
struct Tree {
  std::map<std::string, Tree> dirs;
  std::map<std::string, bool> files;  // value unused; sorted set of names

  void add(std::string_view path, bool isDir) {
    Tree* node = this;
    std::size_t start = 0;
    while (start < path.size()) {
      auto slash = path.find('/', start);
      auto part = path.substr(start, slash == std::string_view::npos ? slash : slash - start);
      bool last = slash == std::string_view::npos || slash + 1 >= path.size();
      if (!part.empty() && part != ".") {
        if (last && !isDir) {
          node->files.emplace(std::string(part), true);
          return;
        }
        node = &node->dirs[std::string(part)];
      }
      if (slash == std::string_view::npos) break;
      start = slash + 1;
    }
  }
};

// Files and subdirectories interleave in one lexicographic order.
void emitTree(FacadeBuilder& out, const rdf::Term& container, const Tree& tree) {
  auto dir = tree.dirs.begin();
  auto file = tree.files.begin();
  while (dir != tree.dirs.end() || file != tree.files.end()) {
    bool takeDir = file == tree.files.end() || (dir != tree.dirs.end() && dir->first < file->first);
    if (takeDir) {
      auto child = out.appendContainer(container);
      emitTree(out, child, dir->second);
      ++dir;
    } else {
      out.appendValue(container, rdf::Term::literal(file->first));
      ++file;
    }
  }
}

void scanDirectory(const fs::path& path, Tree& tree) {
  std::error_code ec;
  fs::directory_iterator it(path, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot read directory " + path.string() + ": " + ec.message());
  for (const auto& entry : it) {
    auto name = entry.path().filename().string();
    // Symlinked directories are listed as names, not followed.
    if (entry.is_directory(ec) && !entry.is_symlink(ec)) {
      scanDirectory(entry.path(), tree.dirs[name]);
    } else {
      tree.files.emplace(name, true);
    }
  }
}

std::uint32_t le(std::string_view b, std::size_t at, int width) {
  std::uint32_t v = 0;
  for (int i = width - 1; i >= 0; --i) {
    v = (v << 8) | static_cast<unsigned char>(b[at + static_cast<std::size_t>(i)]);
  }
  return v;
}

[[noreturn]] void corrupt(std::string_view kind, const std::string& msg) {
  throw Error(ErrorKind::Format, "corrupt " + std::string(kind) + " archive: " + msg);
}

// Entry names come from the central directory.
Tree readZip(std::string_view bytes) {
  Tree tree;
  if (bytes.empty()) return tree;
  constexpr std::size_t kEocdSize = 22;
  if (bytes.size() < kEocdSize) corrupt("zip", "too short");
  std::size_t eocd = std::string_view::npos;
  std::size_t lowest = bytes.size() > kEocdSize + 0xFFFF ? bytes.size() - kEocdSize - 0xFFFF : 0;
  for (std::size_t i = bytes.size() - kEocdSize + 1; i-- > lowest;) {
    if (le(bytes, i, 4) == 0x06054b50) {
      eocd = i;
      break;
    }
  }
  if (eocd == std::string_view::npos) corrupt("zip", "end of central directory not found");
  std::uint32_t count = le(bytes, eocd + 10, 2);
  std::uint32_t offset = le(bytes, eocd + 16, 4);
  if (count == 0xFFFF || offset == 0xFFFFFFFF) {
    throw Error(ErrorKind::Unsupported, "ZIP64 archives are not supported");
  }
  std::size_t pos = offset;
  for (std::uint32_t i = 0; i < count; ++i) {
    if (pos + 46 > bytes.size() || le(bytes, pos, 4) != 0x02014b50) {
      corrupt("zip", "bad central directory entry " + std::to_string(i + 1));
    }
    std::size_t nameLen = le(bytes, pos + 28, 2);
    std::size_t extraLen = le(bytes, pos + 30, 2);
    std::size_t commentLen = le(bytes, pos + 32, 2);
    if (pos + 46 + nameLen > bytes.size()) corrupt("zip", "truncated entry name");
    auto name = bytes.substr(pos + 46, nameLen);
    tree.add(name, name.ends_with('/'));
    pos += 46 + nameLen + extraLen + commentLen;
  }
  return tree;
}

std::string cField(std::string_view block, std::size_t at, std::size_t len) {
  auto f = block.substr(at, len);
  return std::string(f.substr(0, f.find('\0')));
}

std::uint64_t octal(std::string_view field) {
  std::uint64_t v = 0;
  bool any = false;
  for (char c : field) {
    if (c >= '0' && c <= '7') {
      v = v * 8 + static_cast<std::uint64_t>(c - '0');
      any = true;
    } else if (c == '\0' || c == ' ') {
      if (any) break;
    } else {
      corrupt("tar", "bad numeric field");
    }
  }
  return v;
}

// Path from a pax extended header payload, if present.
std::optional<std::string> paxPath(std::string_view data) {
  std::size_t pos = 0;
  while (pos < data.size()) {
    auto space = data.find(' ', pos);
    if (space == std::string_view::npos) break;
    std::size_t len = 0;
    for (char c : data.substr(pos, space - pos)) {
      if (c < '0' || c > '9') corrupt("tar", "bad pax record");
      len = len * 10 + static_cast<std::size_t>(c - '0');
    }
    if (len == 0 || pos + len > data.size()) corrupt("tar", "bad pax record");
    auto record = data.substr(space + 1, pos + len - space - 2);
    if (record.starts_with("path=")) return std::string(record.substr(5));
    pos += len;
  }
  return std::nullopt;
}

Tree readTar(std::string_view bytes) {
  Tree tree;
  constexpr std::size_t kBlock = 512;
  std::size_t pos = 0;
  std::optional<std::string> longName;
  while (pos + kBlock <= bytes.size()) {
    auto header = bytes.substr(pos, kBlock);
    if (std::all_of(header.begin(), header.end(), [](char c) { return c == '\0'; })) break;
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < kBlock; ++i) {
      sum += (i >= 148 && i < 156) ? ' ' : static_cast<unsigned char>(header[i]);
    }
    if (sum != octal(header.substr(148, 8))) corrupt("tar", "header checksum mismatch");
    std::uint64_t size = octal(header.substr(124, 12));
    char type = header[156];
    std::size_t dataStart = pos + kBlock;
    std::size_t padded = static_cast<std::size_t>((size + kBlock - 1) / kBlock * kBlock);
    if (dataStart + size > bytes.size()) corrupt("tar", "truncated entry data");
    auto data = bytes.substr(dataStart, static_cast<std::size_t>(size));
    pos = dataStart + padded;

    if (type == 'L') {
      longName = std::string(data.substr(0, data.find('\0')));
      continue;
    }
    if (type == 'x') {
      if (auto p = paxPath(data)) longName = *p;
      continue;
    }
    if (type == 'g') continue;

    std::string name;
    if (longName) {
      name = std::move(*longName);
      longName.reset();
    } else {
      name = cField(header, 0, 100);
      if (header.substr(257, 5) == "ustar") {
        auto prefix = cField(header, 345, 155);
        if (!prefix.empty()) name = prefix + "/" + name;
      }
    }
    if (type == '5') {
      tree.add(name, true);
    } else if (type == '0' || type == '\0' || type == '7' || type == '1' || type == '2') {
      tree.add(name, name.ends_with('/'));
    }
  }
  if (pos < bytes.size() && pos + kBlock > bytes.size() &&
      bytes.find_first_not_of('\0', pos) != std::string_view::npos) {
    corrupt("tar", "trailing partial block");
  }
  return tree;
}

}  // namespace

void triplifyDirectory(const fs::path& path, const config::FacadeOptions&, FacadeBuilder& out) {
  Tree tree;
  scanDirectory(path, tree);
  emitTree(out, out.root(), tree);
}

void triplifyZip(std::string_view bytes, const config::FacadeOptions&, FacadeBuilder& out) {
  auto tree = readZip(bytes);
  emitTree(out, out.root(), tree);
}

void triplifyTar(std::string_view bytes, const config::FacadeOptions&, FacadeBuilder& out) {
  auto tree = readTar(bytes);
  emitTree(out, out.root(), tree);
}

}  // namespace facadex::triplify
