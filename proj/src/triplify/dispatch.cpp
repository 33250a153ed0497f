#include "facadex/error.hpp"
#include "facadex/util/text.hpp"
#include "internal.hpp"

namespace facadex::triplify {
namespace {

bool isTsv(const resolve::ResolvedSource& source) {
  if (source.mediaType == "text/tab-separated-values") return true;
  if (source.file) return util::iequals(source.file->extension().string(), ".tsv");
  if (source.origin.kind == config::SourceSpec::Kind::Location) {
    auto loc = std::string_view(source.origin.value);
    loc = loc.substr(0, loc.find_first_of("?#"));
    return loc.size() >= 4 && util::iequals(loc.substr(loc.size() - 4), ".tsv");
  }
  return false;
}

Format formatOf(const resolve::ResolvedSource& source) {
  return source.directory ? Format::Directory : formatForMediaType(source.mediaType);
}

template <typename F>
auto withSourceContext(const resolve::ResolvedSource& source, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Format) throw;
    throw Error(ErrorKind::Format, source.origin.describe() + ": " + e.what());
  }
}

config::FacadeOptions effectiveOptions(const resolve::ResolvedSource& source,
                                       const config::FacadeOptions& options) {
  auto effective = options;
  if (!effective.contains(config::opt::kCsvDelimiter) && isTsv(source)) {
    effective.set(std::string(config::opt::kCsvDelimiter), "\t");
  }
  return effective;
}

}  // namespace

Format formatForMediaType(std::string_view mediaType) {
  auto type = util::toLower(util::trim(mediaType.substr(0, mediaType.find(';'))));
  if (type == "text/csv" || type == "text/tab-separated-values") return Format::Csv;
  if (type == "application/json" || type.ends_with("+json")) return Format::Json;
  if (type == "text/html" || type == "application/xhtml+xml") return Format::Html;
  if (type == "application/xml" || type == "text/xml" || type.ends_with("+xml")) return Format::Xml;
  if (type == "text/yaml" || type == "application/yaml" || type == "application/x-yaml" ||
      type == "text/x-yaml")
    return Format::Yaml;
  if (type == "text/markdown" || type == "text/x-markdown") return Format::Markdown;
  if (type == "application/x-bibtex" || type == "text/x-bibtex") return Format::Bibtex;
  if (type == "inode/directory") return Format::Directory;
  if (type == "application/zip") return Format::Zip;
  if (type == "application/x-tar") return Format::Tar;
  if (type.starts_with("text/")) return Format::Text;
  return Format::Binary;
}

std::string_view formatName(Format format) {
  switch (format) {
    case Format::Csv: return "csv";
    case Format::Json: return "json";
    case Format::Xml: return "xml";
    case Format::Html: return "html";
    case Format::Yaml: return "yaml";
    case Format::Markdown: return "markdown";
    case Format::Bibtex: return "bibtex";
    case Format::Text: return "text";
    case Format::Binary: return "binary";
    case Format::Directory: return "directory";
    case Format::Zip: return "zip";
    case Format::Tar: return "tar";
  }
  return "binary";
}

rdf::Graph triplify(const resolve::ResolvedSource& source, const config::FacadeOptions& options,
                    const TripleFilter& filter) {
  auto opts = effectiveOptions(source, options);
  FacadeBuilder out(BuilderSettings::fromOptions(opts), source.identity, filter);
  auto format = formatOf(source);
  withSourceContext(source, [&] {
    switch (format) {
      case Format::Directory:
        if (!source.directory) throw Error(ErrorKind::Config, "media type inode/directory needs a local directory");
        triplifyDirectory(*source.directory, opts, out);
        return;
      case Format::Binary: triplifyBinary(source.bytes, opts, out); return;
      case Format::Zip: triplifyZip(source.bytes, opts, out); return;
      case Format::Tar: triplifyTar(source.bytes, opts, out); return;
      default: break;
    }
    auto text = resolve::decodeToUtf8(source.bytes, source.charset);
    switch (format) {
      case Format::Csv: triplifyCsv(text, opts, out); break;
      case Format::Json: triplifyJson(text, opts, out); break;
      case Format::Xml: triplifyXml(text, opts, out); break;
      case Format::Html: triplifyHtml(text, opts, out); break;
      case Format::Yaml: triplifyYaml(text, opts, out); break;
      case Format::Markdown: triplifyMarkdown(text, opts, out); break;
      case Format::Bibtex: triplifyBibtex(text, opts, out); break;
      default: triplifyText(text, opts, out); break;
    }
  });
  return std::move(out).finish();
}

rdf::Graph triplifyContent(std::string_view content, std::string_view mediaType,
                           const config::FacadeOptions& options, const TripleFilter& filter) {
  resolve::ResolvedSource source;
  source.bytes = std::string(content);
  source.mediaType = std::string(mediaType);
  source.origin = config::SourceSpec::content(std::string(content));
  source.identity = "urn:x-facadex:content:" + util::toHex(util::fnv1a(content));
  return triplify(source, options, filter);
}

void forEachSlice(const resolve::ResolvedSource& source, const config::FacadeOptions& options,
                  const TripleFilter& filter, const std::function<void(rdf::Graph&&)>& onUnit) {
  auto opts = effectiveOptions(source, options);
  auto settings = BuilderSettings::fromOptions(opts);
  detail::BuilderFactory makeBuilder = [&] { return FacadeBuilder(settings, source.identity, filter); };
  auto format = formatOf(source);
  if (format != Format::Csv && format != Format::Json && format != Format::Xml) {
    throw Error(ErrorKind::Config,
                "slice is not supported for " + std::string(formatName(format)) + " sources");
  }
  auto text = resolve::decodeToUtf8(source.bytes, source.charset);
  withSourceContext(source, [&] {
    switch (format) {
      case Format::Csv: detail::sliceCsv(text, opts, makeBuilder, onUnit); break;
      case Format::Json: detail::sliceJson(text, opts, makeBuilder, onUnit); break;
      default: detail::sliceXml(text, opts, makeBuilder, onUnit); break;
    }
  });
}

}  // namespace facadex::triplify
