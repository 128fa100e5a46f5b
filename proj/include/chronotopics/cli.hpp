#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chronotopics::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // data or runtime failure
inline constexpr int kExitUsage = 2;

/// Runs one subcommand (ingest, synth, train, sweep, eval, summarize).
/// Reports go to `out`, structured logs and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads a flat `key = value` config file into "--key=value" arguments.
/// Underscores in keys become dashes; '#' starts a comment.
std::vector<std::string> config_file_arguments(const std::string& path);

}  // namespace chronotopics::cli
