#pragma once

#include "vercheck/vcs/command_cache.hpp"
#include "vercheck/vcs/repository.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace vercheck::vcs {

/// Command templates for the git backend. Each argument may contain the
/// placeholders {commit}, {commit_a}, {commit_b}, {file} and {head}.
struct GitCommands {
    std::string binary = "git";
    std::vector<std::string> global_args = { "-c", "core.quotepath=off", "-c", "color.ui=never",
        "-c", "diff.noprefix=false", "-c", "log.showsignature=false" };
    std::vector<std::string> head = { "rev-parse", "--verify", "-q", "HEAD" };
    std::vector<std::string> log = { "log", "--reverse", "--first-parent", "--diff-merges=first-parent",
        "--no-renames", "--name-status", "--format=%x1e%H%x1f%an%x1f%at%x1f%B%x1f", "{head}" };
    std::vector<std::string> diff = { "diff", "--no-color", "--no-ext-diff", "--no-renames", "{commit_a}",
        "{commit_b}", "--", "{file}" };
    std::vector<std::string> annotate = { "blame", "--porcelain", "--first-parent", "{commit}", "--", "{file}" };
    std::vector<std::string> show = { "cat-file", "blob", "{commit}:{file}" };

    /// Reads overrides from a JSON object with the same field names.
    static GitCommands from_json_file(const std::filesystem::path& path);
};

/// Repository backed by the git command-line tool.
///
/// Revision ordinals come from "git-svn-id: <url>@<n>" trailers when every
/// commit on the first-parent chain carries one; otherwise commits are
/// numbered 1, 2, ... along that chain.
class GitRepository final : public Repository {
public:
    GitRepository(std::filesystem::path path, GitCommands commands = {}, CommandCache cache = {});

    std::vector<CommitLogEntry> log() override;
    FileDiff diff(const std::string& file, RevisionId rev_a, RevisionId rev_b) override;
    std::vector<AnnotatedLine> annotate(const std::string& file, RevisionId rev) override;
    std::optional<RevisionId> file_revision(const std::string& file, RevisionId rev) override;
    std::optional<std::string> snapshot(const std::string& file, RevisionId rev) override;
    RevisionId resolve(RevisionId rev) override;

    const std::filesystem::path& path() const { return m_path; }

    /// git hash of the commit defining state `rev`.
    std::string commit_for(RevisionId rev);

private:
    struct History {
        std::vector<CommitLogEntry> commits;
        std::unordered_map<std::string, RevisionId> by_hash;
        // path -> (ordinal, deleted) touches in ascending order
        std::map<std::string, std::vector<std::pair<std::uint64_t, bool>>, std::less<>> touches;
    };

    const History& history();
    std::string run(const std::vector<std::string>& args, bool cacheable);
    std::vector<std::string> expand(const std::vector<std::string>& tmpl,
        const std::map<std::string, std::string, std::less<>>& values) const;
    const CommitLogEntry& commit_at(RevisionId rev);

    std::filesystem::path m_path;
    GitCommands m_commands;
    CommandCache m_cache;

    std::once_flag m_history_once;
    std::unique_ptr<History> m_history;

    std::mutex m_memo_mutex;
    std::map<std::pair<std::string, std::uint64_t>, std::shared_ptr<const std::vector<AnnotatedLine>>> m_annotate_memo;
};

/// Parses the output of GitCommands::log.
std::vector<CommitLogEntry> parse_git_log(std::string_view text);

}
