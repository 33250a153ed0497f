#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include "facadex/config/options.hpp"
#include "facadex/resolve/source.hpp"
#include "facadex/triplify/builder.hpp"

namespace facadex::triplify {

enum class Format { Csv, Json, Xml, Html, Yaml, Markdown, Bibtex, Text, Binary, Directory, Zip, Tar };

// Registered triplifier for a media type; anything unknown is Binary.
Format formatForMediaType(std::string_view mediaType);
std::string_view formatName(Format format);

// Format-specific triplifiers write into a builder. `text` is UTF-8 for the
// textual formats and raw bytes for binary and archives.
void triplifyCsv(std::string_view text, const config::FacadeOptions& options, FacadeBuilder& out);
void triplifyJson(std::string_view text, const config::FacadeOptions& options, FacadeBuilder& out);
void triplifyXml(std::string_view text, const config::FacadeOptions& options, FacadeBuilder& out);
void triplifyHtml(std::string_view text, const config::FacadeOptions& options, FacadeBuilder& out);
void triplifyYaml(std::string_view text, const config::FacadeOptions& options, FacadeBuilder& out);
void triplifyMarkdown(std::string_view text, const config::FacadeOptions& options,
                      FacadeBuilder& out);
void triplifyBibtex(std::string_view text, const config::FacadeOptions& options,
                    FacadeBuilder& out);
void triplifyText(std::string_view text, const config::FacadeOptions& options, FacadeBuilder& out);
void triplifyBinary(std::string_view bytes, const config::FacadeOptions& options,
                    FacadeBuilder& out);
void triplifyDirectory(const std::filesystem::path& path, const config::FacadeOptions& options,
                       FacadeBuilder& out);
void triplifyZip(std::string_view bytes, const config::FacadeOptions& options, FacadeBuilder& out);
void triplifyTar(std::string_view bytes, const config::FacadeOptions& options, FacadeBuilder& out);

// Dispatches on the effective media type.
rdf::Graph triplify(const resolve::ResolvedSource& source, const config::FacadeOptions& options,
                    const TripleFilter& filter = {});

// Convenience for in-memory content with an explicit media type.
rdf::Graph triplifyContent(std::string_view content, std::string_view mediaType,
                           const config::FacadeOptions& options = {},
                           const TripleFilter& filter = {});

// Slice strategy: each unit (CSV data row, element of a top-level JSON array
// or json.path match, child element of the XML document element or xml.path
// match) becomes its own graph holding the root and the unit at its global
// index. Error(Config) for any other format.
void forEachSlice(const resolve::ResolvedSource& source, const config::FacadeOptions& options,
                  const TripleFilter& filter,
                  const std::function<void(rdf::Graph&&)>& onUnit);

}  // namespace facadex::triplify
