#pragma once

#include "vercheck/core/verification.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

namespace table1 {

inline vercheck::VersionSet versions(int first, int last)
{
    vercheck::VersionSet set;
    for (int v = first; v <= last; ++v)
        set.insert(vercheck::VersionId::parse(fmt::format("{}.0", v)));
    return set;
}

// Versions in which a responsible line with this origin and line number matched.
inline vercheck::VersionSet matched_by(const vercheck::VerificationResult& r, std::uint64_t origin, std::uint64_t line_no)
{
    vercheck::VersionSet set;
    for (const auto& e : r.evidence) {
        const auto* line = std::get_if<vercheck::ResponsibleLine>(&e.source);
        if (line && line->origin_rev.ordinal == origin && line->line_no == line_no)
            set.insert(e.version);
    }
    return set;
}

// Empty when the three verdicts and their evidence are exactly as expected.
inline std::string failure(const std::vector<vercheck::VerificationResult>& results)
{
    using namespace vercheck;
    std::map<std::string, const VerificationResult*> by_id;
    for (const auto& r : results)
        by_id[r.cve_id] = &r;
    if (results.size() != 3 || by_id.size() != 3)
        return fmt::format("expected 3 results, got {}", results.size());

    const auto* a = by_id["CVE-2011-2822"];
    const auto* b = by_id["CVE-2011-4080"];
    const auto* c = by_id["CVE-2012-1521"];
    if (!a || !b || !c)
        return "missing CVE";

    if (!a->verifiable() || a->verified_versions() != versions(1, 13))
        return "CVE-2011-2822 is not Verified{1..13}";
    if (matched_by(*a, 15, 542) != versions(1, 13))
        return "CVE-2011-2822 evidence is not line 542 from r15";

    if (!b->verifiable() || b->verified_versions() != versions(3, 8))
        return "CVE-2011-4080 is not Verified{3..8}";
    if (matched_by(*b, 26072, 352) != versions(3, 8))
        return "CVE-2011-4080 line 352 (r26072) does not match 3..8";
    if (matched_by(*b, 53193, 353) != versions(5, 8))
        return "CVE-2011-4080 line 353 (r53193) does not match 5..8";

    if (c->status != VerificationStatus { Unverifiable { UnverifiableReason::no_commit } })
        return "CVE-2012-1521 is not Unverifiable(no_commit)";
    return {};
}

}
