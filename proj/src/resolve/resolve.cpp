#include <iconv.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "facadex/error.hpp"
#include "facadex/log.hpp"
#include "facadex/resolve/source.hpp"
#include "facadex/util/text.hpp"

namespace facadex::resolve {
namespace {

namespace fs = std::filesystem;

bool isUtf8Name(std::string_view charset) {
  auto lower = util::toLower(charset);
  return lower.empty() || lower == "utf-8" || lower == "utf8";
}

std::string transcode(std::string_view bytes, std::string_view from, std::string_view to) {
  iconv_t cd = ::iconv_open(std::string(to).c_str(), std::string(from).c_str());
  if (cd == reinterpret_cast<iconv_t>(-1)) {
    throw Error(ErrorKind::Config, "unsupported charset: " + std::string(from == "UTF-8" ? to : from));
  }
  std::string out;
  std::string input(bytes);
  char* in = input.data();
  std::size_t inLeft = input.size();
  std::array<char, 8192> buffer{};
  while (inLeft > 0) {
    char* outPtr = buffer.data();
    std::size_t outLeft = buffer.size();
    std::size_t rc = ::iconv(cd, &in, &inLeft, &outPtr, &outLeft);
    out.append(buffer.data(), buffer.size() - outLeft);
    if (rc == static_cast<std::size_t>(-1) && errno != E2BIG) {
      ::iconv_close(cd);
      throw Error(ErrorKind::Format, "invalid byte sequence for charset " + std::string(from));
    }
  }
  ::iconv_close(cd);
  return out;
}

std::string readFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string fileIri(const fs::path& path) {
  return "file://" + fs::absolute(path).lexically_normal().string();
}

}  // namespace

std::string decodeToUtf8(std::string_view bytes, std::string_view charset) {
  if (isUtf8Name(charset)) {
    // Drop a UTF-8 byte order mark.
    if (bytes.starts_with("\xEF\xBB\xBF")) bytes.remove_prefix(3);
    return std::string(bytes);
  }
  return transcode(bytes, charset, "UTF-8");
}

std::string encodeFromUtf8(std::string_view text, std::string_view charset) {
  if (isUtf8Name(charset)) return std::string(text);
  return transcode(text, "UTF-8", charset);
}

ResolvedSource resolve(const config::SourceSpec& spec, const config::FacadeOptions& options,
                       const ResolverPolicy& policy) {
  ResolvedSource out;
  out.origin = spec;
  out.mediaType = config::guessMediaType(spec, options);
  auto explicitCharset = options.get(config::opt::kCharset);
  if (!explicitCharset) {
    if (auto mt = options.get(config::opt::kMediaType)) explicitCharset = config::charsetParameter(*mt);
  }
  out.charset = explicitCharset.value_or("UTF-8");

  switch (spec.kind) {
    case config::SourceSpec::Kind::Content:
      out.bytes = encodeFromUtf8(spec.value, out.charset);
      out.identity = "urn:x-facadex:content:" + util::toHex(util::fnv1a(spec.value));
      return out;

    case config::SourceSpec::Kind::Command: {
      if (!policy.allowCommands) {
        throw Error(ErrorKind::Unsupported, "command sources are disabled: " + spec.value);
      }
      auto result = runCommand(spec.value);
      if (!result.err.empty()) log::debug("command stderr: " + result.err);
      if (result.exitStatus != 0) {
        throw Error(ErrorKind::CommandFailed,
                    "command '" + spec.value + "' exited with status " +
                        std::to_string(result.exitStatus) +
                        (result.err.empty() ? "" : ": " + std::string(util::trim(result.err))));
      }
      out.bytes = std::move(result.out);
      out.identity = "urn:x-facadex:command:" + util::toHex(util::fnv1a(spec.value));
      return out;
    }

    case config::SourceSpec::Kind::Location: break;
  }

  const std::string& location = spec.value;
  auto lower = util::toLower(location);
  if (lower.starts_with("http://") || lower.starts_with("https://")) {
    auto plan = buildHttpRequestPlan(location, options);
    auto response = executeHttp(plan, policy);
    out.bytes = std::move(response.body);
    if (auto cs = config::charsetParameter(response.contentType)) out.charset = *cs;
    if (!options.contains(config::opt::kMediaType) && out.mediaType == "application/octet-stream" &&
        !response.contentType.empty()) {
      auto base = util::trim(std::string_view(response.contentType).substr(
          0, response.contentType.find(';')));
      out.mediaType = util::toLower(base);
    }
    out.identity = location;
    return out;
  }

  fs::path path;
  if (lower.starts_with("file://")) {
    path = location.substr(7);
  } else if (rdf::hasScheme(location) && location.find(':') > 1) {
    throw Error(ErrorKind::UnsupportedScheme, "unsupported URL scheme: " + location);
  } else {
    path = location;
  }
  if (!policy.allowLocalFiles) {
    throw Error(ErrorKind::Unsupported, "local file sources are disabled: " + location);
  }
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    throw Error(ErrorKind::MissingFile, "no such file or directory: " + path.string());
  }
  out.identity = fileIri(path);
  if (fs::is_directory(path, ec)) {
    out.directory = path;
    if (!options.contains(config::opt::kMediaType)) out.mediaType = "inode/directory";
    return out;
  }
  out.file = path;
  out.bytes = readFile(path);
  return out;
}

}  // namespace facadex::resolve
