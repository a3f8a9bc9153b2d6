#pragma once

#include "vercheck/core/catalog.hpp"
#include "vercheck/core/cve.hpp"
#include "vercheck/core/verification.hpp"
#include "vercheck/synth/plan.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace vercheck::synth {

/// Ground truth for one generated CVE.
struct TruthRecord {
    std::string cve_id;
    VerificationStatus expected; // Verified{true versions} or Unverifiable{reason}
    bool stretched_past = false;
    bool future = false;
    bool beta = false;
    FixStyle fix_style = FixStyle::modify;
    std::uint64_t introduced_rev = 0;
    std::uint64_t fixed_rev = 0;

    friend bool operator==(const TruthRecord&, const TruthRecord&) = default;
};

/// Everything generation produces, in memory and on disk.
struct GeneratedRepository {
    std::filesystem::path repo;
    std::filesystem::path dataset_path;
    std::filesystem::path catalog_path;
    std::filesystem::path truth_path;

    Dataset dataset;
    VersionCatalog catalog;
    std::vector<TruthRecord> truth;
};

/// Draws the vulnerabilities of a plan that does not list them explicitly
/// and validates the result. Deterministic in the seed; no I/O.
GroundTruthPlan realize_plan(const GroundTruthPlan& plan);

/// Creates workdir/repo (bare git), dataset.jsonl, catalog.json and
/// truth.jsonl. `workdir` must be empty or absent. Plan inconsistencies are
/// rejected with ConfigError before anything is written.
GeneratedRepository generate(const GroundTruthPlan& plan, const std::filesystem::path& workdir, const std::string& git = "git");

nlohmann::ordered_json truth_to_json(const TruthRecord& record);
TruthRecord truth_from_json(const nlohmann::json& object);
std::vector<TruthRecord> load_truth(const std::filesystem::path& path);

}
