#include "vercheck/core/catalog.hpp"

#include "vercheck/core/cve.hpp"
#include "vercheck/core/error.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace vercheck {

VersionCatalog::VersionCatalog(std::vector<CatalogEntry> entries)
    : m_entries(std::move(entries))
{
    std::sort(m_entries.begin(), m_entries.end(),
        [](const CatalogEntry& a, const CatalogEntry& b) { return a.version < b.version; });
    for (std::size_t i = 1; i < m_entries.size(); ++i) {
        const auto& prev = m_entries[i - 1];
        const auto& cur = m_entries[i];
        if (prev.version == cur.version)
            throw ConfigError(fmt::format("catalog: duplicate version {} / {}", prev.version.label(), cur.version.label()));
        if (cur.release_date < prev.release_date)
            throw ConfigError(fmt::format("catalog: release date of {} ({}) precedes that of {} ({})",
                cur.version.label(), cur.release_date.to_string(), prev.version.label(), prev.release_date.to_string()));
    }
}

std::vector<CatalogEntry> VersionCatalog::official() const
{
    std::vector<CatalogEntry> result;
    std::copy_if(m_entries.begin(), m_entries.end(), std::back_inserter(result),
        [](const CatalogEntry& e) { return e.official; });
    return result;
}

const CatalogEntry* VersionCatalog::find(const VersionId& version) const
{
    auto it = std::lower_bound(m_entries.begin(), m_entries.end(), version,
        [](const CatalogEntry& e, const VersionId& v) { return e.version < v; });
    if (it == m_entries.end() || it->version != version)
        return nullptr;
    return &*it;
}

bool VersionCatalog::contains_official(const VersionId& version) const
{
    const auto* entry = find(version);
    return entry != nullptr && entry->official;
}

std::optional<VersionId> VersionCatalog::first_version() const
{
    for (const auto& entry : m_entries) {
        if (entry.official)
            return entry.version;
    }
    return std::nullopt;
}

bool foundational(const VersionSet& versions, const VersionCatalog& catalog)
{
    auto first = catalog.first_version();
    return first && versions.contains(*first);
}

}
