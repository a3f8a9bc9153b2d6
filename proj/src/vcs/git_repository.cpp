#include "vercheck/vcs/git_repository.hpp"

#include "vercheck/core/error.hpp"
#include "vercheck/vcs/process.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <regex>

#include <fmt/format.h>
#include <json.hpp>

namespace vercheck::vcs {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view empty_tree = "4b825dc642cb6eb9a060e54bf8d69288fbee4904";

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        auto next = text.find(sep, pos);
        parts.push_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos)
            break;
        pos = next + 1;
    }
    return parts;
}

std::string_view trim_newlines(std::string_view s)
{
    while (!s.empty() && (s.front() == '\n' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

}

std::vector<CommitLogEntry> parse_git_log(std::string_view text)
{
    std::vector<CommitLogEntry> entries;
    for (auto record : split(text, '\x1e')) {
        if (trim_newlines(record).empty())
            continue;
        auto fields = split(record, '\x1f');
        if (fields.size() != 5)
            throw ParseError(fmt::format("git log record {}: expected 5 fields, got {}", entries.size() + 1, fields.size()));

        CommitLogEntry entry;
        entry.commit_id = std::string(trim_newlines(fields[0]));
        entry.author = std::string(fields[1]);
        long long seconds = 0;
        auto stamp = fields[2];
        auto [ptr, ec] = std::from_chars(stamp.data(), stamp.data() + stamp.size(), seconds);
        if (ec != std::errc {})
            throw ParseError(fmt::format("git log record {}: bad timestamp '{}'", entries.size() + 1, stamp));
        entry.timestamp = std::chrono::sys_seconds { std::chrono::seconds { seconds } };
        entry.message = std::string(trim_newlines(fields[3]));

        for (auto row : split(fields[4], '\n')) {
            if (row.empty())
                continue;
            auto tab = row.find('\t');
            if (tab == std::string_view::npos || tab == 0)
                throw ParseError(fmt::format("git log record {}: malformed change line '{}'", entries.size() + 1, row));
            entry.changes.push_back({ row.front(), std::string(row.substr(tab + 1)) });
        }
        entry.revision = RevisionId { entries.size() + 1 };
        entries.push_back(std::move(entry));
    }

    static const std::regex svn_id(R"(git-svn-id: \S+@(\d+))");
    std::vector<std::uint64_t> svn_ordinals;
    for (const auto& entry : entries) {
        std::smatch match;
        if (!std::regex_search(entry.message, match, svn_id))
            return entries;
        svn_ordinals.push_back(std::stoull(match[1].str()));
    }
    if (!std::is_sorted(svn_ordinals.begin(), svn_ordinals.end())
        || std::adjacent_find(svn_ordinals.begin(), svn_ordinals.end()) != svn_ordinals.end())
        return entries;
    for (std::size_t i = 0; i < entries.size(); ++i)
        entries[i].revision = RevisionId { svn_ordinals[i] };
    return entries;
}

GitCommands GitCommands::from_json_file(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot open VCS command file '{}'", path.string()));
    GitCommands commands;
    try {
        auto doc = nlohmann::json::parse(in);
        auto read = [&](const char* key, auto& field) {
            if (doc.contains(key))
                doc.at(key).get_to(field);
        };
        read("binary", commands.binary);
        read("global_args", commands.global_args);
        read("head", commands.head);
        read("log", commands.log);
        read("diff", commands.diff);
        read("annotate", commands.annotate);
        read("show", commands.show);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(fmt::format("VCS command file '{}': {}", path.string(), e.what()));
    }
    return commands;
}

GitRepository::GitRepository(fs::path path, GitCommands commands, CommandCache cache)
    : m_path(fs::weakly_canonical(path))
    , m_commands(std::move(commands))
    , m_cache(std::move(cache))
{
}

std::vector<std::string> GitRepository::expand(
    const std::vector<std::string>& tmpl, const std::map<std::string, std::string, std::less<>>& values) const
{
    std::vector<std::string> out;
    out.reserve(tmpl.size());
    for (auto arg : tmpl) {
        for (const auto& [name, value] : values) {
            auto placeholder = "{" + name + "}";
            for (auto pos = arg.find(placeholder); pos != std::string::npos; pos = arg.find(placeholder, pos + value.size()))
                arg.replace(pos, placeholder.size(), value);
        }
        out.push_back(std::move(arg));
    }
    return out;
}

std::string GitRepository::run(const std::vector<std::string>& args, bool cacheable)
{
    std::vector<std::string> argv { "-C", m_path.string() };
    argv.insert(argv.end(), m_commands.global_args.begin(), m_commands.global_args.end());
    argv.insert(argv.end(), args.begin(), args.end());

    std::string key;
    if (cacheable && m_cache.enabled()) {
        std::vector<std::string> parts { m_commands.binary };
        parts.insert(parts.end(), argv.begin(), argv.end());
        key = CommandCache::key(parts);
        if (auto hit = m_cache.get(key))
            return *std::move(hit);
    }

    auto result = run_process(m_commands.binary, argv);
    if (result.exit_code != 0) {
        throw RepositoryError(fmt::format("{} {} failed (exit {}): {}", m_commands.binary,
            args.empty() ? std::string() : args.front(), result.exit_code, trim_newlines(result.err)));
    }
    if (!key.empty())
        m_cache.put(key, result.out);
    return std::move(result.out);
}

const GitRepository::History& GitRepository::history()
{
    std::call_once(m_history_once, [this] {
        if (!fs::exists(m_path))
            throw RepositoryError(fmt::format("repository '{}' does not exist", m_path.string()));

        auto history = std::make_unique<History>();
        std::vector<std::string> argv { "-C", m_path.string() };
        argv.insert(argv.end(), m_commands.global_args.begin(), m_commands.global_args.end());
        argv.insert(argv.end(), m_commands.head.begin(), m_commands.head.end());
        auto head = run_process(m_commands.binary, argv);
        if (head.exit_code != 0) {
            if (!trim_newlines(head.err).empty())
                throw RepositoryError(fmt::format("{}: {}", m_path.string(), trim_newlines(head.err)));
            m_history = std::move(history); // no commits yet
            return;
        }
        auto head_hash = std::string(trim_newlines(head.out));

        history->commits = parse_git_log(run(expand(m_commands.log, { { "head", head_hash } }), true));
        for (const auto& commit : history->commits) {
            history->by_hash.emplace(commit.commit_id, commit.revision);
            for (const auto& change : commit.changes)
                history->touches[change.path].emplace_back(commit.revision.ordinal, change.status == 'D');
        }
        m_history = std::move(history);
    });
    return *m_history;
}

std::vector<CommitLogEntry> GitRepository::log()
{
    return history().commits;
}

const CommitLogEntry& GitRepository::commit_at(RevisionId rev)
{
    const auto& commits = history().commits;
    auto it = std::upper_bound(commits.begin(), commits.end(), rev,
        [](RevisionId r, const CommitLogEntry& c) { return r < c.revision; });
    if (it == commits.begin())
        throw NotFoundError(fmt::format("revision {} precedes the repository history", rev.label()));
    return *std::prev(it);
}

RevisionId GitRepository::resolve(RevisionId rev)
{
    return commit_at(rev).revision;
}

std::string GitRepository::commit_for(RevisionId rev)
{
    return commit_at(rev).commit_id;
}

std::optional<RevisionId> GitRepository::file_revision(const std::string& file, RevisionId rev)
{
    const auto& touches = history().touches;
    auto it = touches.find(file);
    if (it == touches.end())
        return std::nullopt;
    const auto& list = it->second;
    auto pos = std::upper_bound(list.begin(), list.end(), rev.ordinal,
        [](std::uint64_t r, const std::pair<std::uint64_t, bool>& t) { return r < t.first; });
    if (pos == list.begin())
        return std::nullopt;
    --pos;
    if (pos->second)
        return std::nullopt;
    return RevisionId { pos->first };
}

FileDiff GitRepository::diff(const std::string& file, RevisionId rev_a, RevisionId rev_b)
{
    const auto& commits = history().commits;
    auto tree_for = [&](RevisionId rev) -> std::string {
        if (commits.empty() || rev < commits.front().revision)
            return std::string(empty_tree);
        return commit_for(rev);
    };
    auto a = tree_for(rev_a);
    auto b = tree_for(rev_b);
    FileDiff empty { file, file, false, {} };
    if (a == b)
        return empty;
    auto files = parse_unified_diff(run(expand(m_commands.diff, { { "commit_a", a }, { "commit_b", b }, { "file", file } }), true));
    if (files.empty())
        return empty;
    return std::move(files.front());
}

std::vector<AnnotatedLine> GitRepository::annotate(const std::string& file, RevisionId rev)
{
    if (!file_revision(file, rev))
        throw NotFoundError(fmt::format("'{}' does not exist at {}", file, rev.label()));
    auto state = resolve(rev);

    auto memo_key = std::make_pair(file, state.ordinal);
    {
        std::lock_guard lock(m_memo_mutex);
        if (auto it = m_annotate_memo.find(memo_key); it != m_annotate_memo.end())
            return *it->second;
    }

    auto commit = commit_for(state);
    std::string key;
    std::vector<AnnotatedLine> lines;
    if (m_cache.enabled()) {
        key = CommandCache::key({ "annotate-normalized", m_commands.binary, m_path.string(), commit, file });
        if (auto hit = m_cache.get(key))
            lines = parse_annotate(*hit);
    }
    if (key.empty() || lines.empty()) {
        const auto& by_hash = history().by_hash;
        auto raw = run(expand(m_commands.annotate, { { "commit", commit }, { "file", file } }), false);
        lines = parse_blame_porcelain(raw, [&](std::string_view hash) {
            auto it = by_hash.find(std::string(hash));
            if (it == by_hash.end())
                throw RepositoryError(fmt::format("blame attributes '{}' to {}, which is not on the linear history", file, hash));
            return it->second;
        });
        if (!key.empty())
            m_cache.put(key, render_annotate(lines));
    }
    std::lock_guard lock(m_memo_mutex);
    auto [it, inserted] = m_annotate_memo.emplace(memo_key, std::make_shared<const std::vector<AnnotatedLine>>(std::move(lines)));
    return *it->second;
}

std::optional<std::string> GitRepository::snapshot(const std::string& file, RevisionId rev)
{
    if (!file_revision(file, rev))
        return std::nullopt;
    return run(expand(m_commands.show, { { "commit", commit_for(rev) }, { "file", file } }), true);
}

}
