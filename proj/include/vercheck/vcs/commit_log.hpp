#pragma once

#include "vercheck/core/revision.hpp"

#include <chrono>
#include <string>
#include <vector>

namespace vercheck::vcs {

struct FileChange {
    char status = 'M'; // A, M, D (renames are reported as D + A)
    std::string path;

    friend bool operator==(const FileChange&, const FileChange&) = default;
};

struct CommitLogEntry {
    RevisionId revision;
    std::string commit_id; // backend-native identifier (git hash)
    std::string author;
    std::chrono::sys_seconds timestamp {};
    std::string message;
    std::vector<FileChange> changes;

    std::vector<std::string> changed_files() const;
};

}
