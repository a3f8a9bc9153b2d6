#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace vercheck::vcs {

struct ProcessResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

/// Runs `program` (searched on PATH unless it contains a slash) and captures
/// both output streams. Throws RepositoryError if the program cannot start.
ProcessResult run_process(const std::string& program, const std::vector<std::string>& args,
    const std::string& stdin_data = {});

}
