#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vercheck::vcs {

/// On-disk store of raw tool outputs keyed by a hash of (repo, command, args).
/// Writes go through a temporary file and an atomic rename, so concurrent
/// readers only ever see complete entries.
class CommandCache {
public:
    CommandCache() = default; // disabled
    explicit CommandCache(std::filesystem::path dir);

    bool enabled() const { return !m_dir.empty(); }

    static std::string key(const std::vector<std::string>& parts);

    std::optional<std::string> get(const std::string& key) const;
    void put(const std::string& key, const std::string& value) const;

private:
    std::filesystem::path path_for(const std::string& key) const;

    std::filesystem::path m_dir;
};

}
