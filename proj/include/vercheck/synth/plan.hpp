#pragma once

#include "vercheck/core/cve.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vercheck::synth {

struct NoiseSpec {
    double p_stretch_past = 0.0;
    double p_future = 0.0;
    double p_beta = 0.0;
};

enum class FixStyle { modify, addition_only };
enum class LinkKind { linked, no_bug, no_commit };

/// One planted vulnerability. Revisions are commit ordinals of the
/// generated history (1-based; the first commit creates the base files).
struct PlannedVulnerability {
    std::string cve_id;
    BugId bug_id = 0;
    std::uint64_t introduced_rev = 0;
    std::uint64_t fixed_rev = 0;
    std::optional<std::uint64_t> second_line_rev; // modify style only
    FixStyle fix_style = FixStyle::modify;
    LinkKind link = LinkKind::linked;
    /// Claimed version indices (0-based into the official versions). When
    /// empty, the truth itself is claimed.
    std::vector<unsigned> claimed;
};

struct GroundTruthPlan {
    std::uint64_t seed = 1;
    unsigned versions = 10;
    unsigned commits_per_version = 12;
    unsigned files = 5;
    unsigned lines_per_file = 40;

    // Shape of randomly drawn vulnerabilities (ignored when `vulnerabilities` is given).
    unsigned vulnerability_count = 10;
    double addition_only_fraction = 0.3;
    double multi_line_fraction = 0.3;
    double no_bug_fraction = 0.0;
    double no_commit_fraction = 0.0;
    NoiseSpec noise;

    bool collision_mode = false; // copy vulnerable line texts into later filler lines
    bool beta_versions = true; // add non-official "<n>.5" versions between releases

    std::vector<PlannedVulnerability> vulnerabilities;

    std::uint64_t total_revisions() const { return static_cast<std::uint64_t>(versions + 1) * commits_per_version; }
    /// Snapshot revision of official version index i.
    std::uint64_t snapshot_rev(unsigned i) const { return static_cast<std::uint64_t>(i + 1) * commits_per_version; }
};

GroundTruthPlan load_plan(const std::filesystem::path& path);
GroundTruthPlan parse_plan(const std::string& json_text);

}
