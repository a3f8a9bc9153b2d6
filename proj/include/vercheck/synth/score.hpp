#pragma once

#include "vercheck/core/verification.hpp"
#include "vercheck/synth/generator.hpp"

#include <map>
#include <vector>

namespace vercheck::synth {

struct PrecisionRecall {
    std::size_t true_positive = 0;
    std::size_t predicted = 0;
    std::size_t actual = 0;

    /// 1.0 when nothing was predicted.
    double precision() const { return predicted == 0 ? 1.0 : static_cast<double>(true_positive) / static_cast<double>(predicted); }
    /// 1.0 when nothing was expected.
    double recall() const { return actual == 0 ? 1.0 : static_cast<double>(true_positive) / static_cast<double>(actual); }
};

struct Score {
    std::size_t cves = 0;
    std::size_t exact_matches = 0;
    PrecisionRecall overall; // over (cve, version) pairs
    std::map<VersionId, PrecisionRecall> per_version;

    double exact_match_rate() const { return cves == 0 ? 1.0 : static_cast<double>(exact_matches) / static_cast<double>(cves); }
};

/// A CVE matches exactly when its status (and, if verified, V') equals the
/// truth. Throws AnalysisError if the CVE identifiers differ.
Score score(const std::vector<VerificationResult>& results, const std::vector<TruthRecord>& truth);

}
