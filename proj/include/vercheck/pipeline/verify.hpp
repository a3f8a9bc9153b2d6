#pragma once

#include "vercheck/core/catalog.hpp"
#include "vercheck/core/verification.hpp"
#include "vercheck/pipeline/backtrace.hpp"
#include "vercheck/pipeline/mining.hpp"
#include "vercheck/vcs/repository.hpp"

#include <vector>

namespace vercheck::pipeline {

struct VerifyOptions {
    unsigned jobs = 1;
    BacktraceOptions backtrace;
};

/// Step 1 over a whole dataset.
std::vector<FixCommit> mine(const Dataset& dataset, vcs::Repository& repo, const PatternSet& patterns,
    MiningSummary* summary = nullptr);

/// Step 2: one result per fix commit, in the same order.
std::vector<BacktraceResult> trace(vcs::Repository& repo, const std::vector<FixCommit>& fixes, const VerifyOptions& options);

/// Step 3: scans every official catalog version for every CVE and assembles
/// the verdicts. `traces[i]` belongs to `fixes[i]`.
std::vector<VerificationResult> scan(const Dataset& dataset, const VersionCatalog& catalog, vcs::Repository& repo,
    const std::vector<FixCommit>& fixes, const std::vector<BacktraceResult>& traces, const VerifyOptions& options);

/// All three steps.
std::vector<VerificationResult> verify(const Dataset& dataset, const VersionCatalog& catalog, vcs::Repository& repo,
    const PatternSet& patterns, const VerifyOptions& options = {});

}
