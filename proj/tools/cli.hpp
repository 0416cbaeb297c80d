#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace diffent::cli {

inline constexpr std::uint64_t kDefaultSeed = 1;
inline constexpr const char* kOutputDirEnv = "DIFFENT_OUTPUT_DIR";

enum ExitCode : int { kSuccess = 0, kNumericalFailure = 1, kValidationFailure = 2 };

// Resolved command line: every option of the chosen command with its final
// value, after merging the optional JSON config file under the flags.
struct RunConfig {
  std::string command;
  std::map<std::string, std::string> params;
  std::uint64_t seed = kDefaultSeed;
  std::filesystem::path out;  // primary JSON artifact
  std::filesystem::path csv;  // optional CSV artifact; empty when not requested
};

// FNV-1a of the canonical JSON of command, params and seed. Output paths are
// not part of the hash.
std::string config_hash(const RunConfig& config);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace diffent::cli
