#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polymer::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand. args excludes the program name. Results go to
/// <out>/<command>.csv with a sibling <command>.manifest.json.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace polymer::cli
