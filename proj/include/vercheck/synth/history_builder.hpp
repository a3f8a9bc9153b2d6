#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace vercheck::synth {

/// Accumulates a linear commit history in memory and writes it to a bare
/// git repository with one `git fast-import` run.
class HistoryBuilder {
public:
    /// With `svn_trailers`, each commit message ends with a git-svn-id
    /// trailer carrying the given ordinal, so the repository reproduces
    /// sparse Subversion revision numbers.
    explicit HistoryBuilder(bool svn_trailers = false);

    void write_file(const std::string& path, const std::vector<std::string>& lines);
    void remove_file(const std::string& path);

    bool exists(const std::string& path) const { return m_files.contains(path); }
    const std::vector<std::string>& file(const std::string& path) const;

    /// Commits the staged changes. Ordinals must increase.
    void commit(std::uint64_t ordinal, const std::string& message, long long unix_time,
        const std::string& author = "Synthetic Developer");

    std::size_t commit_count() const { return m_commit_count; }

    const std::string& stream() const { return m_stream; }

    /// Creates `repo_dir` as a bare repository (branch "main") and imports the
    /// history. Throws RepositoryError on git failure.
    void materialize(const std::filesystem::path& repo_dir, const std::string& git = "git") const;

private:
    bool m_svn_trailers;
    std::map<std::string, std::vector<std::string>> m_files;
    std::map<std::string, bool> m_staged; // path -> deleted
    std::string m_stream;
    std::size_t m_commit_count = 0;
    std::uint64_t m_last_ordinal = 0;
};

}
