#include "vercheck/vcs/command_cache.hpp"

#include "vercheck/core/error.hpp"
#include "vercheck/core/hash.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <fmt/format.h>

namespace vercheck::vcs {

namespace fs = std::filesystem;

CommandCache::CommandCache(fs::path dir)
    : m_dir(std::move(dir))
{
    std::error_code ec;
    fs::create_directories(m_dir, ec);
    if (ec)
        throw ConfigError(fmt::format("cannot create cache directory '{}': {}", m_dir.string(), ec.message()));
}

std::string CommandCache::key(const std::vector<std::string>& parts)
{
    std::string joined;
    for (const auto& part : parts) {
        joined += part;
        joined += '\0';
    }
    return sha256_hex(joined);
}

fs::path CommandCache::path_for(const std::string& key) const
{
    return m_dir / key.substr(0, 2) / key.substr(2);
}

std::optional<std::string> CommandCache::get(const std::string& key) const
{
    if (!enabled())
        return std::nullopt;
    std::ifstream in(path_for(key), std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void CommandCache::put(const std::string& key, const std::string& value) const
{
    if (!enabled())
        return;
    static std::atomic<unsigned> counter { 0 };
    auto target = path_for(key);
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    auto temp = target.parent_path() / fmt::format(".tmp.{}.{}.{}", target.filename().string(), ::getpid(), counter++);
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        out << value;
        if (!out)
            return; // an unwritable cache only costs time
    }
    fs::rename(temp, target, ec);
    if (ec)
        fs::remove(temp, ec);
}

}
