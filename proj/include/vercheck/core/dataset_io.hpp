#pragma once

#include "vercheck/core/catalog.hpp"
#include "vercheck/core/cve.hpp"

#include <filesystem>
#include <iosfwd>
#include <json.hpp>

namespace vercheck {

/// Catalog file: a JSON object mapping version label to
/// {"release_date": "YYYY-MM-DD", "snapshot_rev": "r123", "official": true}.
VersionCatalog load_catalog(const std::filesystem::path& path);
VersionCatalog parse_catalog(const nlohmann::json& document);
nlohmann::ordered_json catalog_to_json(const VersionCatalog& catalog);

/// Dataset file: one JSON object per line with "cve_id", "claimed_versions"
/// (list of labels, or {"before": "X"} expanded against the official catalog
/// versions), "bug_ids" and an optional "published" date.
Dataset load_dataset(const std::filesystem::path& path, const VersionCatalog& catalog);
Dataset parse_dataset(std::istream& in, const VersionCatalog& catalog);
CveRecord parse_cve_record(const nlohmann::json& object, const VersionCatalog& catalog);
nlohmann::ordered_json cve_record_to_json(const CveRecord& record);

void write_dataset(std::ostream& out, const Dataset& dataset);

}
