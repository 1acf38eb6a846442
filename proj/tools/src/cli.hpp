#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chainglue::cli {

/// Environment variable that overrides --cap (with a warning).
inline constexpr const char* kCapEnvVar = "CHAINGLUE_MAX_SITES";

/// chainglue <glue|certify|truncation|lr> --config FILE [--out DIR] [--jobs N] [--cap N]
/// args excludes the program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chainglue::cli
