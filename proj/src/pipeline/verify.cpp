#include "vercheck/pipeline/verify.hpp"

#include "vercheck/core/error.hpp"
#include "vercheck/core/parallel.hpp"
#include "vercheck/pipeline/scan.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

namespace vercheck::pipeline {

std::vector<FixCommit> mine(const Dataset& dataset, vcs::Repository& repo, const PatternSet& patterns, MiningSummary* summary)
{
    return mine_fix_commits(repo.log(), dataset_bug_ids(dataset), patterns, summary);
}

std::vector<BacktraceResult> trace(vcs::Repository& repo, const std::vector<FixCommit>& fixes, const VerifyOptions& options)
{
    std::vector<BacktraceResult> traces(fixes.size());
    parallel_for(fixes.size(), options.jobs, [&](std::size_t i) { traces[i] = backtrace(repo, fixes[i], options.backtrace); });
    return traces;
}

namespace {

template<typename T>
void append_unique(std::vector<T>& out, const std::vector<T>& items)
{
    for (const auto& item : items) {
        if (std::find(out.begin(), out.end(), item) == out.end())
            out.push_back(item);
    }
}

struct CveWork {
    std::vector<ResponsibleLine> lines;
    std::vector<AdditionOnlyMarker> markers;
    std::vector<std::string> warnings;
};

}

std::vector<VerificationResult> scan(const Dataset& dataset, const VersionCatalog& catalog, vcs::Repository& repo,
    const std::vector<FixCommit>& fixes, const std::vector<BacktraceResult>& traces, const VerifyOptions& options)
{
    if (fixes.size() != traces.size())
        throw AnalysisError("scan: fix commits and back-trace results do not correspond");

    std::vector<VersionSnapshot> snapshots;
    for (const auto& entry : catalog.official()) {
        try {
            repo.resolve(entry.snapshot_rev);
        } catch (const NotFoundError& e) {
            throw RepositoryError(fmt::format("catalog version {}: snapshot {} does not resolve: {}",
                entry.version.label(), entry.snapshot_rev.label(), e.what()));
        }
        snapshots.push_back({ entry.version, entry.snapshot_rev });
    }

    std::map<BugId, std::vector<std::size_t>> fixes_by_bug;
    for (std::size_t i = 0; i < fixes.size(); ++i) {
        for (auto bug : fixes[i].bug_ids)
            fixes_by_bug[bug].push_back(i);
    }

    std::vector<VerificationResult> results(dataset.size());
    std::vector<CveWork> work(dataset.size());
    std::vector<std::size_t> verifiable;
    for (std::size_t c = 0; c < dataset.size(); ++c) {
        const auto& cve = dataset[c];
        results[c].cve_id = cve.cve_id;
        if (cve.bug_ids.empty()) {
            results[c].status = Unverifiable { UnverifiableReason::no_bug };
            continue;
        }
        std::vector<std::size_t> commit_indices;
        for (auto bug : cve.bug_ids) {
            if (auto it = fixes_by_bug.find(bug); it != fixes_by_bug.end())
                commit_indices.insert(commit_indices.end(), it->second.begin(), it->second.end());
        }
        std::sort(commit_indices.begin(), commit_indices.end());
        commit_indices.erase(std::unique(commit_indices.begin(), commit_indices.end()), commit_indices.end());
        if (commit_indices.empty()) {
            results[c].status = Unverifiable { UnverifiableReason::no_commit };
            continue;
        }
        for (auto i : commit_indices) {
            append_unique(work[c].lines, traces[i].lines);
            append_unique(work[c].markers, traces[i].markers);
            for (const auto& warning : traces[i].warnings)
                work[c].warnings.push_back(fmt::format("{}: {}", fixes[i].revision.label(), warning));
        }
        results[c].status = Verified {};
        verifiable.push_back(c);
    }

    std::vector<std::vector<Evidence>> found(verifiable.size() * snapshots.size());
    parallel_for(found.size(), options.jobs, [&](std::size_t task) {
        const auto& cve_work = work[verifiable[task / snapshots.size()]];
        found[task] = scan_version(repo, snapshots[task % snapshots.size()], cve_work.lines, cve_work.markers);
    });

    for (std::size_t k = 0; k < verifiable.size(); ++k) {
        auto& result = results[verifiable[k]];
        auto& verified = std::get<Verified>(result.status);
        const auto& cve_work = work[verifiable[k]];
        auto item_index = [&](const Evidence& e) -> std::size_t {
            if (const auto* line = std::get_if<ResponsibleLine>(&e.source))
                return static_cast<std::size_t>(std::find(cve_work.lines.begin(), cve_work.lines.end(), *line) - cve_work.lines.begin());
            const auto& marker = std::get<AdditionOnlyMarker>(e.source);
            return cve_work.lines.size()
                + static_cast<std::size_t>(std::find(cve_work.markers.begin(), cve_work.markers.end(), marker) - cve_work.markers.begin());
        };
        for (std::size_t v = 0; v < snapshots.size(); ++v) {
            auto& evidence = found[k * snapshots.size() + v];
            std::stable_sort(evidence.begin(), evidence.end(),
                [&](const Evidence& a, const Evidence& b) { return item_index(a) < item_index(b); });
            if (!evidence.empty())
                verified.versions.insert(snapshots[v].version);
            std::move(evidence.begin(), evidence.end(), std::back_inserter(result.evidence));
        }
        result.warnings = std::move(work[verifiable[k]].warnings);
    }
    return results;
}

std::vector<VerificationResult> verify(const Dataset& dataset, const VersionCatalog& catalog, vcs::Repository& repo,
    const PatternSet& patterns, const VerifyOptions& options)
{
    auto fixes = mine(dataset, repo, patterns);
    auto traces = trace(repo, fixes, options);
    return scan(dataset, catalog, repo, fixes, traces, options);
}

}
