#pragma once

#include <string_view>

// Diagnostics go to stderr only. Verbosity comes from the FX_LOG environment
// variable: off, error, warn (default), info, debug.
namespace facadex::log {

void debug(std::string_view message);
void info(std::string_view message);
void warn(std::string_view message);
void error(std::string_view message);

}  // namespace facadex::log
