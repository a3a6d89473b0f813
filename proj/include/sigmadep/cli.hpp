#pragma once

#include <istream>
#include <string>
#include <vector>

namespace sigmadep::cli {

// Bumped whenever a field of the report is renamed, removed or reordered.
inline constexpr int kSchemaVersion = 1;

// Exit codes. For analyze, 0 means dependent and 1 independent; the other
// commands use 0 for a positive answer (certificate valid, witness found,
// frame and checks agree) and 1 for a negative one.
inline constexpr int kPositive = 0;
inline constexpr int kNegative = 1;
inline constexpr int kError = 2;

struct Outcome {
  int exit_code = kError;
  std::string output;  // JSON report with --json, text rendering otherwise
};

// Runs one command. args excludes the program name; expressions that are
// omitted or given as "-" are read from in.
Outcome run(const std::vector<std::string>& args, std::istream& in);

// The serialized report with the timing field removed (for comparisons).
std::string without_timing(const std::string& report_json);

}  // namespace sigmadep::cli
