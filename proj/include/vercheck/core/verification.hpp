#pragma once

#include "vercheck/core/cve.hpp"
#include "vercheck/core/trace_types.hpp"

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vercheck {

enum class UnverifiableReason { no_bug, no_commit };

std::string_view to_string(UnverifiableReason reason);

struct Verified {
    VersionSet versions; // V'(cve); may be empty
    friend bool operator==(const Verified&, const Verified&) = default;
};

struct Unverifiable {
    UnverifiableReason reason;
    friend bool operator==(const Unverifiable&, const Unverifiable&) = default;
};

using VerificationStatus = std::variant<Verified, Unverifiable>;

struct Evidence {
    VersionId version;
    TraceItem source;
    std::uint64_t matched_line_no = 0; // line in the snapshot; 0 for addition-only matches

    friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct VerificationResult {
    std::string cve_id;
    VerificationStatus status;
    std::vector<Evidence> evidence;
    std::vector<std::string> warnings;

    bool verifiable() const { return std::holds_alternative<Verified>(status); }

    /// V'(cve); throws AnalysisError when unverifiable.
    const VersionSet& verified_versions() const;

    friend bool operator==(const VerificationResult&, const VerificationResult&) = default;
};

}
