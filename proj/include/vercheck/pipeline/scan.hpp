#pragma once

#include "vercheck/core/verification.hpp"
#include "vercheck/vcs/repository.hpp"

#include <span>
#include <vector>

namespace vercheck::pipeline {

struct VersionSnapshot {
    VersionId version;
    RevisionId snapshot_rev;
};

/// Looks for the responsible lines and addition-only markers in one version.
///
/// A line matches when the snapshot's annotation has a line with the same
/// origin revision and the same trailing-whitespace-stripped content. A
/// marker matches when the file exists at the snapshot and was last changed
/// at or before the pre-fix revision.
std::vector<Evidence> scan_version(vcs::Repository& repo, const VersionSnapshot& snapshot,
    std::span<const ResponsibleLine> lines, std::span<const AdditionOnlyMarker> markers);

}
