#pragma once

#include "vercheck/core/revision.hpp"
#include "vercheck/vcs/annotate.hpp"
#include "vercheck/vcs/commit_log.hpp"
#include "vercheck/vcs/diff.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vercheck::vcs {

/// Read-only view of a linearly numbered repository history.
///
/// Revision arguments name repository states: a revision ordinal that no
/// commit carries denotes the state after the last commit below it, as in
/// Subversion. Implementations must be safe to call concurrently.
class Repository {
public:
    virtual ~Repository() = default;

    /// All commits in ascending revision order.
    virtual std::vector<CommitLogEntry> log() = 0;

    /// Unified diff of `file` between two states. A file present at only one
    /// side produces an all-added or all-removed hunk.
    virtual FileDiff diff(const std::string& file, RevisionId rev_a, RevisionId rev_b) = 0;

    /// Throws NotFoundError if the file does not exist at `rev`.
    virtual std::vector<AnnotatedLine> annotate(const std::string& file, RevisionId rev) = 0;

    /// Last revision <= rev that modified the file; nullopt if absent at rev.
    virtual std::optional<RevisionId> file_revision(const std::string& file, RevisionId rev) = 0;

    /// File contents at `rev`; nullopt if absent.
    virtual std::optional<std::string> snapshot(const std::string& file, RevisionId rev) = 0;

    /// The commit revision that defines state `rev`. Throws NotFoundError if
    /// `rev` precedes the first commit.
    virtual RevisionId resolve(RevisionId rev) = 0;
};

}
