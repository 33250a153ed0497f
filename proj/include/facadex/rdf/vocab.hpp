#pragma once

#include <string_view>

namespace facadex::vocab {

inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kFx = "http://sparql.xyz/facade-x/ns/";
inline constexpr std::string_view kXyz = "http://sparql.xyz/facade-x/data/";

inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kRdfLangString =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

inline constexpr std::string_view kXsdString = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view kXsdBoolean = "http://www.w3.org/2001/XMLSchema#boolean";
inline constexpr std::string_view kXsdInt = "http://www.w3.org/2001/XMLSchema#int";
inline constexpr std::string_view kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view kXsdLong = "http://www.w3.org/2001/XMLSchema#long";
inline constexpr std::string_view kXsdDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view kXsdFloat = "http://www.w3.org/2001/XMLSchema#float";
inline constexpr std::string_view kXsdDouble = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view kXsdDateTime = "http://www.w3.org/2001/XMLSchema#dateTime";
inline constexpr std::string_view kXsdBase64 = "http://www.w3.org/2001/XMLSchema#base64Binary";

inline constexpr std::string_view kFxRoot = "http://sparql.xyz/facade-x/ns/root";
inline constexpr std::string_view kFxProperties = "http://sparql.xyz/facade-x/ns/properties";
inline constexpr std::string_view kFxAnySlot = "http://sparql.xyz/facade-x/ns/anySlot";

// Service IRI scheme, including the trailing colon.
inline constexpr std::string_view kServiceScheme = "x-sparql-anything:";

}  // namespace facadex::vocab
