#include "vercheck/synth/history_builder.hpp"

#include "vercheck/core/error.hpp"
#include "vercheck/vcs/process.hpp"

#include <fmt/format.h>

namespace vercheck::synth {

namespace {

constexpr std::string_view svn_uuid = "0039d316-1c4b-4281-b951-d872f2087c98";

void append_data(std::string& stream, std::string_view payload)
{
    stream += fmt::format("data {}\n", payload.size());
    stream += payload;
    stream += '\n';
}

}

HistoryBuilder::HistoryBuilder(bool svn_trailers)
    : m_svn_trailers(svn_trailers)
{
}

void HistoryBuilder::write_file(const std::string& path, const std::vector<std::string>& lines)
{
    m_files[path] = lines;
    m_staged[path] = false;
}

void HistoryBuilder::remove_file(const std::string& path)
{
    m_files.erase(path);
    m_staged[path] = true;
}

const std::vector<std::string>& HistoryBuilder::file(const std::string& path) const
{
    auto it = m_files.find(path);
    if (it == m_files.end())
        throw ConfigError(fmt::format("history builder: no file '{}'", path));
    return it->second;
}

void HistoryBuilder::commit(std::uint64_t ordinal, const std::string& message, long long unix_time, const std::string& author)
{
    if (ordinal <= m_last_ordinal)
        throw ConfigError(fmt::format("history builder: ordinal {} does not increase", ordinal));

    auto full_message = message;
    if (m_svn_trailers)
        full_message += fmt::format("\n\ngit-svn-id: svn://svn.example.org/project/trunk@{} {}", ordinal, svn_uuid);
    full_message += '\n';

    auto email = fmt::format("{}@example.org", author.substr(0, author.find(' ')));
    m_stream += "commit refs/heads/main\n";
    m_stream += fmt::format("mark :{}\n", m_commit_count + 1);
    m_stream += fmt::format("author {} <{}> {} +0000\n", author, email, unix_time);
    m_stream += fmt::format("committer {} <{}> {} +0000\n", author, email, unix_time);
    append_data(m_stream, full_message);
    if (m_commit_count > 0)
        m_stream += fmt::format("from :{}\n", m_commit_count);
    for (const auto& [path, deleted] : m_staged) {
        if (deleted) {
            m_stream += fmt::format("D {}\n", path);
            continue;
        }
        std::string content;
        for (const auto& line : m_files.at(path)) {
            content += line;
            content += '\n';
        }
        m_stream += fmt::format("M 100644 inline {}\n", path);
        append_data(m_stream, content);
    }
    m_stream += '\n';
    m_staged.clear();
    ++m_commit_count;
    m_last_ordinal = ordinal;
}

void HistoryBuilder::materialize(const std::filesystem::path& repo_dir, const std::string& git) const
{
    auto init = vcs::run_process(git, { "init", "-q", "--bare", "--initial-branch=main", repo_dir.string() });
    if (init.exit_code != 0)
        throw RepositoryError(fmt::format("git init '{}' failed: {}", repo_dir.string(), init.err));
    auto import = vcs::run_process(git, { "-C", repo_dir.string(), "fast-import", "--quiet", "--done" }, m_stream + "done\n");
    if (import.exit_code != 0)
        throw RepositoryError(fmt::format("git fast-import into '{}' failed: {}", repo_dir.string(), import.err));
}

}
