#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "facadex/triplify/triplifiers.hpp"

namespace facadex::triplify::detail {

using BuilderFactory = std::function<FacadeBuilder()>;
using UnitSink = std::function<void(rdf::Graph&&)>;

void sliceCsv(std::string_view text, const config::FacadeOptions& options,
              const BuilderFactory& makeBuilder, const UnitSink& onUnit);
void sliceJson(std::string_view text, const config::FacadeOptions& options,
               const BuilderFactory& makeBuilder, const UnitSink& onUnit);
void sliceXml(std::string_view text, const config::FacadeOptions& options,
              const BuilderFactory& makeBuilder, const UnitSink& onUnit);

// Literal for a number given its source lexical form: integers become
// xsd:int (xsd:integer beyond 32 bits), everything else xsd:float.
rdf::Term numberLiteral(std::string_view lexical, bool integral);

}  // namespace facadex::triplify::detail
