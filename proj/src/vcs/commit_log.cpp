#include "vercheck/vcs/commit_log.hpp"

namespace vercheck::vcs {

std::vector<std::string> CommitLogEntry::changed_files() const
{
    std::vector<std::string> files;
    files.reserve(changes.size());
    for (const auto& change : changes)
        files.push_back(change.path);
    return files;
}

}
