#pragma once

#include "vercheck/core/date.hpp"
#include "vercheck/core/revision.hpp"
#include "vercheck/core/version.hpp"

#include <optional>
#include <vector>

namespace vercheck {

struct CatalogEntry {
    VersionId version;
    Date release_date;
    RevisionId snapshot_rev;
    bool official = true;
};

/// Released versions in increasing order, each pinned to a repository snapshot.
class VersionCatalog {
public:
    VersionCatalog() = default;

    /// Sorts by version and validates: versions strictly increasing, release
    /// dates non-decreasing. Throws ConfigError otherwise.
    explicit VersionCatalog(std::vector<CatalogEntry> entries);

    const std::vector<CatalogEntry>& entries() const { return m_entries; }

    /// Official versions only; the analysis never looks at the others.
    std::vector<CatalogEntry> official() const;

    const CatalogEntry* find(const VersionId& version) const;
    bool contains_official(const VersionId& version) const;

    /// First official version, or nullopt for an empty catalog.
    std::optional<VersionId> first_version() const;

    bool empty() const { return m_entries.empty(); }

private:
    std::vector<CatalogEntry> m_entries;
};

}
