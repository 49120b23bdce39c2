#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"

namespace nfb::cli {

// Stable exit codes for scripts and CI.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,        // bad flags, malformed config, failed self-check
  kInfeasible = 2,   // parameters violate a convergence inequality
  kDiverged = 3,     // a run with certified parameters diverged
  kIoError = 4,
};

std::uint64_t fnv1a64(std::string_view bytes);

/// 16 hex digits of FNV-1a over the canonical (sorted-key) dump.
std::string config_hash(const nlohmann::json& config);

/// Defaults for every section; a config file is merged on top.
nlohmann::json default_config();

/// "a.b.c=value".  The value is parsed as JSON when possible (numbers,
/// booleans, arrays, quoted strings) and taken as a bare string otherwise.
void apply_override(nlohmann::json& config, std::string_view assignment);

/// Reads a JSON config file; throws IoError on a missing or malformed file.
nlohmann::json load_config(const std::string& path);

/// Full command line, argv[0] included.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nfb::cli
