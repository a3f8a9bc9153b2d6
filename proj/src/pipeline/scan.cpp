#include "vercheck/pipeline/scan.hpp"

#include "vercheck/pipeline/backtrace.hpp"

#include <map>

namespace vercheck::pipeline {

std::vector<Evidence> scan_version(vcs::Repository& repo, const VersionSnapshot& snapshot,
    std::span<const ResponsibleLine> lines, std::span<const AdditionOnlyMarker> markers)
{
    std::vector<Evidence> evidence;

    std::map<std::string, std::vector<const ResponsibleLine*>> by_file;
    for (const auto& line : lines)
        by_file[line.file].push_back(&line);

    for (const auto& [file, wanted] : by_file) {
        if (!repo.file_revision(file, snapshot.snapshot_rev))
            continue;
        auto annotated = repo.annotate(file, snapshot.snapshot_rev);

        std::map<std::pair<std::uint64_t, std::string>, std::uint64_t> present;
        for (const auto& row : annotated)
            present.emplace(std::make_pair(row.origin_rev.ordinal, strip_trailing_whitespace(row.text)), row.line_no);

        for (const auto* line : wanted) {
            auto it = present.find({ line->origin_rev.ordinal, line->content });
            if (it != present.end())
                evidence.push_back({ snapshot.version, *line, it->second });
        }
    }

    for (const auto& marker : markers) {
        auto rev = repo.file_revision(marker.file, snapshot.snapshot_rev);
        if (rev && *rev <= marker.pre_fix_rev)
            evidence.push_back({ snapshot.version, marker, 0 });
    }
    return evidence;
}

}
