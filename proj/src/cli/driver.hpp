#pragma once

#include "vercheck/cli/app.hpp"
#include "vercheck/core/catalog.hpp"
#include "vercheck/core/cve.hpp"
#include "vercheck/vcs/git_repository.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>

namespace vercheck::cli {

enum class Stage { mine, trace, scan, analyze, stats, vdm };

inline constexpr Stage all_stages[] = { Stage::mine, Stage::trace, Stage::scan, Stage::analyze, Stage::stats, Stage::vdm };

std::string_view stage_name(Stage stage);

/// Runs pipeline stages against an output directory, tracking inputs and
/// outputs in manifest.json so `report` can skip fresh stages.
class Driver {
public:
    Driver(RunConfig config, std::ostream& log);

    void run_stage(Stage stage);
    /// Runs every stage whose recorded inputs or outputs no longer match.
    void run_stale();
    bool is_fresh(Stage stage);

    /// Marks the manifest incomplete after a failure in `stage`.
    void record_failure(Stage stage, const std::string& message);

    const RunConfig& config() const { return m_config; }

private:
    using Fingerprint = std::map<std::string, std::string>;

    Fingerprint inputs_of(Stage stage);
    std::vector<std::string> outputs_of(Stage stage) const;

    void mine();
    void trace();
    void scan();
    void analyze();
    void stats();
    void vdm();

    const Dataset& dataset();
    const VersionCatalog& catalog();
    vcs::GitRepository& repo();
    std::string repo_head();
    std::filesystem::path artifact(const std::string& name) const { return m_config.out / name; }
    std::filesystem::path require_artifact(const std::string& name, Stage producer) const;

    void load_manifest();
    void save_manifest();
    std::string config_hash() const;

    RunConfig m_config;
    std::ostream& m_log;
    nlohmann::ordered_json m_manifest;

    std::optional<VersionCatalog> m_catalog;
    std::optional<Dataset> m_dataset;
    std::unique_ptr<vcs::GitRepository> m_repo;
    std::optional<std::string> m_head;
};

/// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);
std::string file_hash(const std::filesystem::path& path);

}
