#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <unistd.h>

#include "facadex/rdf/io.hpp"
#include "facadex/rdf/isomorphism.hpp"

namespace facadex::testing {

inline std::filesystem::path fixture(std::string_view relative) {
  return std::filesystem::path(FACADEX_FIXTURES) / relative;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline constexpr std::string_view kPrefixes =
    "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n"
    "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
    "@prefix fx: <http://sparql.xyz/facade-x/ns/> .\n"
    "@prefix xyz: <http://sparql.xyz/facade-x/data/> .\n"
    "@prefix ex: <http://ex.org/> .\n";

// Hand-written oracle graphs, with the usual prefixes predeclared.
inline rdf::Graph ttl(std::string_view body) {
  return rdf::parseGraph(std::string(kPrefixes) + std::string(body), rdf::RdfFormat::Turtle);
}

inline std::string nt(const rdf::Graph& g) { return rdf::serialize(g, rdf::RdfFormat::NTriples); }

// Restores the working directory when it goes out of scope.
class ScopedCwd {
 public:
  explicit ScopedCwd(const std::filesystem::path& dir) : saved_(std::filesystem::current_path()) {
    std::filesystem::current_path(dir);
  }
  ~ScopedCwd() { std::filesystem::current_path(saved_); }

 private:
  std::filesystem::path saved_;
};

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0;; ++i) {
      path_ = base / ("facadex-test-" + std::to_string(::getpid()) + "-" + std::to_string(i));
      if (std::filesystem::create_directory(path_)) break;
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

  void write(std::string_view name, std::string_view content) const {
    auto p = path_ / name;
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << content;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace facadex::testing
