#include "vercheck/pipeline/backtrace.hpp"

#include "vercheck/core/error.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace vercheck::pipeline {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

bool wanted(const std::string& file, const BacktraceOptions& options)
{
    if (options.source_suffixes.empty())
        return true;
    return std::any_of(options.source_suffixes.begin(), options.source_suffixes.end(),
        [&](const std::string& suffix) { return file.ends_with(suffix); });
}

}

std::string strip_trailing_whitespace(std::string_view text)
{
    while (!text.empty() && is_space(text.back()))
        text.remove_suffix(1);
    return std::string(text);
}

bool is_trivial_line(std::string_view text)
{
    while (!text.empty() && is_space(text.front()))
        text.remove_prefix(1);
    while (!text.empty() && is_space(text.back()))
        text.remove_suffix(1);
    return text.empty() || text == "{" || text == "}";
}

BacktraceResult backtrace(vcs::Repository& repo, const FixCommit& commit, const BacktraceOptions& options)
{
    if (commit.revision.ordinal < 1)
        throw AnalysisError(fmt::format("fix commit {} has no predecessor revision", commit.revision.label()));

    BacktraceResult result;
    result.fix_rev = commit.revision;
    const RevisionId pre_fix { commit.revision.ordinal - 1 };

    for (const auto& file : commit.files) {
        if (!wanted(file, options))
            continue;

        vcs::FileDiff diff;
        try {
            diff = repo.diff(file, pre_fix, commit.revision);
        } catch (const ParseError& e) {
            result.warnings.push_back(fmt::format("{}: diff unparseable, skipped: {}", file, e.what()));
            result.partial = true;
            continue;
        }
        if (diff.binary) {
            result.warnings.push_back(fmt::format("{}: binary file, skipped", file));
            continue;
        }

        std::vector<vcs::RemovedLine> removed;
        for (const auto& hunk : diff.hunks) {
            for (auto& line : vcs::removed_lines(hunk)) {
                if (!is_trivial_line(line.text))
                    removed.push_back(std::move(line));
            }
        }
        if (removed.empty()) {
            result.markers.push_back({ file, pre_fix });
            continue;
        }

        std::vector<vcs::AnnotatedLine> annotated;
        try {
            annotated = repo.annotate(file, pre_fix);
        } catch (const RepositoryError& e) {
            result.warnings.push_back(fmt::format("{}: annotate at {} failed: {}", file, pre_fix.label(), e.what()));
            result.partial = true;
            continue;
        } catch (const ParseError& e) {
            result.warnings.push_back(fmt::format("{}: annotate at {} unparseable: {}", file, pre_fix.label(), e.what()));
            result.partial = true;
            continue;
        }

        for (const auto& line : removed) {
            if (line.old_line_no == 0 || line.old_line_no > annotated.size()) {
                result.warnings.push_back(fmt::format("{}:{}: removed line outside the annotated file", file, line.old_line_no));
                result.partial = true;
                continue;
            }
            const auto& origin = annotated[line.old_line_no - 1];
            auto content = strip_trailing_whitespace(line.text);
            if (strip_trailing_whitespace(origin.text) != content) {
                result.warnings.push_back(fmt::format("{}:{}: diff and annotate disagree on the line content", file, line.old_line_no));
                result.partial = true;
                continue;
            }
            if (!(origin.origin_rev < commit.revision)) {
                result.warnings.push_back(fmt::format("{}:{}: origin {} is not older than the fix", file, line.old_line_no, origin.origin_rev.label()));
                continue;
            }
            result.lines.push_back({ file, line.old_line_no, std::move(content), origin.origin_rev, commit.revision });
        }
    }
    return result;
}

}
