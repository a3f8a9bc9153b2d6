#pragma once

#include "vercheck/core/cve.hpp"
#include "vercheck/core/revision.hpp"
#include "vercheck/vcs/commit_log.hpp"

#include <filesystem>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vercheck::pipeline {

/// Commit-message patterns that link a commit to bug tracker IDs. Capture
/// group 1 of each pattern holds one ID or a comma-separated list of IDs.
class PatternSet {
public:
    /// "BUG=n(,n)*" and "BUG=http://crbug.com/n".
    static PatternSet chrome_default();
    /// Throws ConfigError for an invalid regular expression.
    static PatternSet from_strings(std::vector<std::string> patterns);
    /// A JSON array of pattern strings.
    static PatternSet load(const std::filesystem::path& path);

    /// Every ID mentioned by any pattern, in any occurrence.
    std::set<BugId> extract(std::string_view message) const;

    const std::vector<std::string>& sources() const { return m_sources; }

private:
    std::vector<std::string> m_sources;
    std::vector<std::regex> m_compiled;
};

struct FixCommit {
    RevisionId revision;
    std::set<BugId> bug_ids;
    std::vector<std::string> files;

    friend bool operator==(const FixCommit&, const FixCommit&) = default;
};

struct MiningSummary {
    std::size_t commits_scanned = 0;
    std::size_t pattern_matches = 0; // commits mentioning any bug ID
    std::size_t fix_commits = 0; // ... of which link a dataset bug
};

/// A commit qualifies iff a pattern matches its message and at least one
/// extracted ID is in `bug_ids`; only such IDs are kept.
std::vector<FixCommit> mine_fix_commits(const std::vector<vcs::CommitLogEntry>& log, const std::set<BugId>& bug_ids,
    const PatternSet& patterns, MiningSummary* summary = nullptr);

/// Union of the bug IDs referenced by the dataset.
std::set<BugId> dataset_bug_ids(const Dataset& dataset);

}
