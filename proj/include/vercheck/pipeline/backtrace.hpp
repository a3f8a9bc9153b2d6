#pragma once

#include "vercheck/core/trace_types.hpp"
#include "vercheck/pipeline/mining.hpp"
#include "vercheck/vcs/repository.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace vercheck::pipeline {

struct BacktraceOptions {
    /// File name suffixes to trace (".cc", ".h", ...). Empty traces every file.
    std::vector<std::string> source_suffixes;
};

struct BacktraceResult {
    RevisionId fix_rev;
    std::vector<ResponsibleLine> lines;
    std::vector<AdditionOnlyMarker> markers;
    std::vector<std::string> warnings;
    bool partial = false; // some file could not be traced

    friend bool operator==(const BacktraceResult&, const BacktraceResult&) = default;
};

std::string strip_trailing_whitespace(std::string_view text);

/// Empty after trimming, or exactly "{" or "}".
bool is_trivial_line(std::string_view text);

/// Diffs every changed file between r_fixed - 1 and r_fixed and annotates the
/// removed non-trivial lines at r_fixed - 1. Files whose diff removed no
/// non-trivial line yield an addition-only marker instead.
BacktraceResult backtrace(vcs::Repository& repo, const FixCommit& commit, const BacktraceOptions& options = {});

}
