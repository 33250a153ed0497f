#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "facadex/rdf/graph.hpp"

namespace facadex::rdf {

enum class RdfFormat { NTriples, Turtle, NQuads };

// "NT", "TTL", "NQ" (case-insensitive).
std::optional<RdfFormat> rdfFormatFromName(std::string_view name);
// .nt, .ttl, .nq
std::optional<RdfFormat> rdfFormatFromPath(const std::filesystem::path& path);
std::string_view mediaTypeOf(RdfFormat format);

// NT and TTL write the default graph only; NQ writes every graph.
std::string serialize(const Graph& graph, RdfFormat format);
std::string serialize(const Dataset& dataset, RdfFormat format);

// Throws Error(Syntax) with a "line:column" diagnostic. Relative IRIs are
// resolved against `baseIri` when given, rejected otherwise.
Dataset parseRdf(std::string_view text, RdfFormat format, std::string_view baseIri = {});
Graph parseGraph(std::string_view text, RdfFormat format, std::string_view baseIri = {});

// Loads one RDF file, or every .nt/.ttl/.nq file of a directory (sorted by
// name, non-recursive), into a single dataset.
Dataset loadRdf(const std::filesystem::path& path);

}  // namespace facadex::rdf
