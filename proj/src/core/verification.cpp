#include "vercheck/core/verification.hpp"

#include "vercheck/core/error.hpp"

namespace vercheck {

std::string_view to_string(UnverifiableReason reason)
{
    switch (reason) {
    case UnverifiableReason::no_bug:
        return "no_bug";
    case UnverifiableReason::no_commit:
        return "no_commit";
    }
    return "unknown";
}

const VersionSet& VerificationResult::verified_versions() const
{
    if (const auto* verified = std::get_if<Verified>(&status))
        return verified->versions;
    throw AnalysisError("verification result for " + cve_id + " is unverifiable");
}

}
