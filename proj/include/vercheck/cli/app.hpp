#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace vercheck::cli {

inline constexpr const char* tool_version = "1.0.0";

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_repository = 3,
    exit_parse = 4,
    exit_analysis = 5,
    exit_internal = 70,
};

struct RunConfig {
    std::filesystem::path repo;
    std::string vcs = "git";
    std::filesystem::path vcs_config; // JSON overrides of the git command templates
    std::filesystem::path dataset;
    std::filesystem::path catalog;
    std::filesystem::path patterns; // empty: built-in BUG= patterns
    unsigned jobs = 1;
    std::filesystem::path cache_dir; // empty: no on-disk cache
    std::filesystem::path out = "out";
    std::size_t from_month = 6;
    bool strict_er = false;
    bool horizon_sweep = false;
    std::vector<std::string> source_suffixes; // empty: every file
    std::filesystem::path plan; // synth / report
    bool table1 = false;
};

/// Parses the command line and runs one subcommand. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Manifest with the timestamp removed, for comparing two runs.
std::string normalized_manifest(const std::filesystem::path& manifest_path);

}
