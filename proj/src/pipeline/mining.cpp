#include "vercheck/pipeline/mining.hpp"

#include "vercheck/core/error.hpp"

#include <charconv>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

namespace vercheck::pipeline {

PatternSet PatternSet::chrome_default()
{
    return from_strings({ R"(BUG=(\d+(?:,\d+)*))", R"(BUG=https?://crbug\.com/(\d+))" });
}

PatternSet PatternSet::from_strings(std::vector<std::string> patterns)
{
    PatternSet set;
    for (auto& pattern : patterns) {
        try {
            set.m_compiled.emplace_back(pattern, std::regex::ECMAScript);
        } catch (const std::regex_error& e) {
            throw ConfigError(fmt::format("invalid commit pattern '{}': {}", pattern, e.what()));
        }
        if (set.m_compiled.back().mark_count() < 1)
            throw ConfigError(fmt::format("commit pattern '{}' has no capture group for the bug ID", pattern));
        set.m_sources.push_back(std::move(pattern));
    }
    return set;
}

PatternSet PatternSet::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot open pattern file '{}'", path.string()));
    try {
        return from_strings(nlohmann::json::parse(in).get<std::vector<std::string>>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(fmt::format("pattern file '{}': {}", path.string(), e.what()));
    }
}

std::set<BugId> PatternSet::extract(std::string_view message) const
{
    std::set<BugId> ids;
    for (const auto& regex : m_compiled) {
        using iterator = std::regex_iterator<std::string_view::const_iterator>;
        for (iterator it(message.begin(), message.end(), regex), end; it != end; ++it) {
            auto group = (*it)[1];
            std::string_view list(&*group.first, static_cast<std::size_t>(group.length()));
            std::size_t pos = 0;
            while (pos <= list.size()) {
                auto comma = list.find(',', pos);
                auto token = list.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
                BugId id = 0;
                auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
                if (ec == std::errc {} && ptr == token.data() + token.size() && !token.empty())
                    ids.insert(id);
                if (comma == std::string_view::npos)
                    break;
                pos = comma + 1;
            }
        }
    }
    return ids;
}

std::vector<FixCommit> mine_fix_commits(const std::vector<vcs::CommitLogEntry>& log, const std::set<BugId>& bug_ids,
    const PatternSet& patterns, MiningSummary* summary)
{
    MiningSummary counts;
    std::vector<FixCommit> fixes;
    for (const auto& entry : log) {
        ++counts.commits_scanned;
        auto mentioned = patterns.extract(entry.message);
        if (mentioned.empty())
            continue;
        ++counts.pattern_matches;
        FixCommit fix;
        fix.revision = entry.revision;
        for (auto id : mentioned) {
            if (bug_ids.contains(id))
                fix.bug_ids.insert(id);
        }
        if (fix.bug_ids.empty())
            continue;
        fix.files = entry.changed_files();
        fixes.push_back(std::move(fix));
    }
    counts.fix_commits = fixes.size();
    if (summary != nullptr)
        *summary = counts;
    return fixes;
}

std::set<BugId> dataset_bug_ids(const Dataset& dataset)
{
    std::set<BugId> ids;
    for (const auto& record : dataset)
        ids.insert(record.bug_ids.begin(), record.bug_ids.end());
    return ids;
}

}
