#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace facadex::util {

std::string toLower(std::string_view s);
std::string toUpper(std::string_view s);
std::string_view trim(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
std::vector<std::string> split(std::string_view s, char sep);

std::string encodeUtf8(std::uint32_t codepoint);

// Percent-encodes every byte outside [A-Za-z0-9_-].
std::string encodeLocalName(std::string_view key);
// Decodes %XX sequences; malformed sequences are copied verbatim.
std::string percentDecode(std::string_view s);

// RFC 4648 base64 with padding.
std::string base64Encode(std::span<const std::uint8_t> bytes);
std::string base64Encode(std::string_view bytes);

// FNV-1a 64-bit.
std::uint64_t fnv1a(std::string_view data);
std::string toHex(std::uint64_t value);

// Minimal RFC 3986 reference resolution used for relative IRIs in RDF text.
std::string resolveIri(std::string_view base, std::string_view relative);

}  // namespace facadex::util
