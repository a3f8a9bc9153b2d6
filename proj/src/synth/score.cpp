#include "vercheck/synth/score.hpp"

#include "vercheck/core/error.hpp"

#include <fmt/format.h>

namespace vercheck::synth {

namespace {

const VersionSet* versions_of(const VerificationStatus& status)
{
    if (const auto* verified = std::get_if<Verified>(&status))
        return &verified->versions;
    return nullptr;
}

}

Score score(const std::vector<VerificationResult>& results, const std::vector<TruthRecord>& truth)
{
    if (results.size() != truth.size())
        throw AnalysisError(fmt::format("score: {} results for {} truth records", results.size(), truth.size()));

    std::map<std::string, const TruthRecord*> by_id;
    for (const auto& record : truth)
        if (!by_id.emplace(record.cve_id, &record).second)
            throw AnalysisError(fmt::format("score: duplicate truth record {}", record.cve_id));

    Score out;
    static const VersionSet empty;
    for (const auto& result : results) {
        auto it = by_id.find(result.cve_id);
        if (it == by_id.end())
            throw AnalysisError(fmt::format("score: {} has no truth record", result.cve_id));
        const auto& expected = it->second->expected;
        ++out.cves;
        if (result.status == expected)
            ++out.exact_matches;

        const auto* predicted = versions_of(result.status);
        const auto* actual = versions_of(expected);
        if (!predicted)
            predicted = &empty;
        if (!actual)
            actual = &empty;
        for (const auto& v : *predicted) {
            auto& pr = out.per_version[v];
            ++pr.predicted;
            ++out.overall.predicted;
            if (actual->contains(v)) {
                ++pr.true_positive;
                ++out.overall.true_positive;
            }
        }
        for (const auto& v : *actual) {
            ++out.per_version[v].actual;
            ++out.overall.actual;
        }
    }
    return out;
}

}
