#pragma once

#include "vercheck/core/date.hpp"
#include "vercheck/core/version.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace vercheck {

using BugId = std::uint64_t;
using VersionSet = std::set<VersionId>;

struct CveRecord {
    std::string cve_id;
    VersionSet claimed_versions; // V(cve)
    std::set<BugId> bug_ids;
    std::optional<Date> published;
};

using Dataset = std::vector<CveRecord>;

/// True iff the catalog's first official version is in `versions`.
class VersionCatalog;
bool foundational(const VersionSet& versions, const VersionCatalog& catalog);

}
