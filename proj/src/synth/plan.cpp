#include "vercheck/synth/plan.hpp"

#include "vercheck/core/error.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace vercheck::synth {

using nlohmann::json;

namespace {

FixStyle parse_fix_style(const std::string& text)
{
    if (text == "modify")
        return FixStyle::modify;
    if (text == "addition-only" || text == "addition_only")
        return FixStyle::addition_only;
    throw ConfigError(fmt::format("plan: unknown fix_style '{}'", text));
}

LinkKind parse_link(const std::string& text)
{
    if (text == "linked")
        return LinkKind::linked;
    if (text == "no_bug")
        return LinkKind::no_bug;
    if (text == "no_commit")
        return LinkKind::no_commit;
    throw ConfigError(fmt::format("plan: unknown link kind '{}'", text));
}

}

GroundTruthPlan parse_plan(const std::string& json_text)
{
    GroundTruthPlan plan;
    try {
        auto doc = json::parse(json_text);
        auto read = [&](const char* key, auto& field) {
            if (doc.contains(key))
                doc.at(key).get_to(field);
        };
        read("seed", plan.seed);
        read("versions", plan.versions);
        read("commits_per_version", plan.commits_per_version);
        read("files", plan.files);
        read("lines_per_file", plan.lines_per_file);
        read("vulnerability_count", plan.vulnerability_count);
        read("addition_only_fraction", plan.addition_only_fraction);
        read("multi_line_fraction", plan.multi_line_fraction);
        read("no_bug_fraction", plan.no_bug_fraction);
        read("no_commit_fraction", plan.no_commit_fraction);
        read("collision_mode", plan.collision_mode);
        read("beta_versions", plan.beta_versions);
        if (doc.contains("noise")) {
            const auto& noise = doc.at("noise");
            plan.noise.p_stretch_past = noise.value("p_stretch_past", 0.0);
            plan.noise.p_future = noise.value("p_future", 0.0);
            plan.noise.p_beta = noise.value("p_beta", 0.0);
        }
        if (doc.contains("vulnerabilities")) {
            for (const auto& v : doc.at("vulnerabilities")) {
                PlannedVulnerability vuln;
                vuln.cve_id = v.at("cve_id").get<std::string>();
                vuln.bug_id = v.value("bug_id", BugId { 0 });
                vuln.introduced_rev = v.value("introduced_rev", std::uint64_t { 0 });
                vuln.fixed_rev = v.value("fixed_rev", std::uint64_t { 0 });
                if (v.contains("second_line_rev"))
                    vuln.second_line_rev = v.at("second_line_rev").get<std::uint64_t>();
                vuln.fix_style = parse_fix_style(v.value("fix_style", std::string("modify")));
                vuln.link = parse_link(v.value("link", std::string("linked")));
                if (v.contains("claimed"))
                    vuln.claimed = v.at("claimed").get<std::vector<unsigned>>();
                plan.vulnerabilities.push_back(std::move(vuln));
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("plan: {}", e.what()));
    }
    return plan;
}

GroundTruthPlan load_plan(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot open plan file '{}'", path.string()));
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_plan(buffer.str());
}

}
