#include "vercheck/cli/app.hpp"

#include "driver.hpp"

#include "vercheck/core/dataset_io.hpp"
#include "vercheck/core/error.hpp"
#include "vercheck/pipeline/report_io.hpp"
#include "vercheck/synth/generator.hpp"
#include "vercheck/synth/score.hpp"
#include "vercheck/synth/table1.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

namespace vercheck::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::config:
        return exit_config;
    case ErrorKind::repository:
    case ErrorKind::not_found:
        return exit_repository;
    case ErrorKind::parse:
        return exit_parse;
    case ErrorKind::analysis:
        break;
    }
    return exit_analysis;
}

void apply_environment(RunConfig& config, bool cache_flag_given)
{
    if (!cache_flag_given)
        if (const char* dir = std::getenv("VERCHECK_CACHE_DIR"); dir && *dir)
            config.cache_dir = dir;
}

void require_file(const fs::path& path, const char* flag)
{
    if (path.empty())
        throw ConfigError(fmt::format("{} is required", flag));
    if (!fs::is_regular_file(path))
        throw ConfigError(fmt::format("{} '{}' is not a readable file", flag, path.string()));
}

// All paths are checked before any stage runs.
void validate(const RunConfig& config, std::string_view command)
{
    if (config.jobs < 1)
        throw ConfigError("--jobs must be at least 1");
    bool needs_repo = command == "mine" || command == "trace" || command == "scan";
    bool needs_inputs = command != "trace" && command != "synth";
    if (command == "report" && (config.table1 || !config.plan.empty()))
        return;
    if (command == "report")
        needs_repo = true;
    if (needs_repo) {
        if (config.repo.empty())
            throw ConfigError("--repo is required");
        if (!fs::is_directory(config.repo))
            throw ConfigError(fmt::format("--repo '{}' is not a directory", config.repo.string()));
    }
    if (needs_inputs) {
        require_file(config.dataset, "--dataset");
        require_file(config.catalog, "--catalog");
    }
    if (!config.patterns.empty())
        require_file(config.patterns, "--patterns");
    if (!config.vcs_config.empty())
        require_file(config.vcs_config, "--vcs-config");
}

struct SynthOutput {
    fs::path repo;
    fs::path dataset;
    fs::path catalog;
    fs::path truth; // empty for the built-in three-CVE fixture
};

SynthOutput run_synth(const RunConfig& config, const fs::path& workdir, std::ostream& log)
{
    std::string git = "git";
    if (const char* env = std::getenv("VERCHECK_GIT"); env && *env)
        git = env;
    if (config.table1) {
        auto fixture = synth::build_table1_fixture(workdir, git);
        log << fmt::format("[synth] three-CVE fixture in {}\n", workdir.string());
        return { fixture.repo, fixture.dataset_path, fixture.catalog_path, {} };
    }
    if (config.plan.empty())
        throw ConfigError("synth needs --plan or --table1");
    auto plan = synth::load_plan(config.plan);
    auto generated = synth::generate(plan, workdir, git);
    log << fmt::format("[synth] {} CVEs in {}\n", generated.truth.size(), workdir.string());
    return { generated.repo, generated.dataset_path, generated.catalog_path, generated.truth_path };
}

void write_score(const fs::path& out, const fs::path& truth_path, std::ostream& log)
{
    auto truth = synth::load_truth(truth_path);
    std::ifstream in(out / "verification.jsonl");
    std::vector<VerificationResult> results;
    for (const auto& object : pipeline::read_json_lines(in))
        results.push_back(pipeline::verification_from_json(object));
    auto s = synth::score(results, truth);

    ordered_json j;
    j["cves"] = s.cves;
    j["exact_matches"] = s.exact_matches;
    j["exact_match_rate"] = s.exact_match_rate();
    j["precision"] = s.overall.precision();
    j["recall"] = s.overall.recall();
    ordered_json per_version = ordered_json::array();
    for (const auto& [version, pr] : s.per_version)
        per_version.push_back({ { "version", version.label() }, { "precision", pr.precision() }, { "recall", pr.recall() },
            { "true_positive", pr.true_positive }, { "predicted", pr.predicted }, { "actual", pr.actual } });
    j["per_version"] = per_version;
    write_file_atomic(out / "score.json", j.dump(2) + "\n");
    log << fmt::format("[score] exact match {}/{}\n", s.exact_matches, s.cves);
}

void add_common(CLI::App* cmd, RunConfig& config, bool& cache_given)
{
    cmd->add_option("--repo", config.repo, "Repository path");
    cmd->add_option("--vcs", config.vcs, "VCS command template set (git)");
    cmd->add_option("--vcs-config", config.vcs_config, "JSON file overriding the VCS command templates");
    cmd->add_option("--dataset", config.dataset, "CVE dataset (JSON lines)");
    cmd->add_option("--catalog", config.catalog, "Version catalog (JSON)");
    cmd->add_option("--patterns", config.patterns, "JSON array of commit message patterns");
    cmd->add_option("--jobs,-j", config.jobs, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option_function<std::string>(
        "--cache-dir", [&](const std::string& dir) { config.cache_dir = dir; cache_given = true; }, "On-disk command cache");
    cmd->add_option("--out,-o", config.out, "Output directory");
    cmd->add_option("--from-month", config.from_month, "First month since release used by VDM fits");
    cmd->add_flag("--strict-er", config.strict_er, "Count verified(v) only for CVEs that claim v");
    cmd->add_flag("--horizon-sweep", config.horizon_sweep, "Fit VDMs at every monthly horizon");
    cmd->add_option("--source-suffix", config.source_suffixes, "Only trace files with this suffix (repeatable)");
}

}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app { "Verify the vulnerable versions claimed for CVEs against repository history.", "vercheck" };
    app.set_version_flag("--version", tool_version);
    app.require_subcommand(1);

    RunConfig config;
    bool cache_given = false;

    auto* mine = app.add_subcommand("mine", "Find fix commits for the dataset's bug IDs");
    auto* trace = app.add_subcommand("trace", "Trace lines removed by each fix commit to their origin");
    auto* scan = app.add_subcommand("scan", "Look for the responsible code in every version");
    auto* analyze = app.add_subcommand("analyze", "Error rates, error taxonomy and foundational tables");
    auto* stats = app.add_subcommand("stats", "Hypothesis tests and Laplace trend factors");
    auto* vdm = app.add_subcommand("vdm", "Fit vulnerability discovery models and compare their quality");
    auto* synth = app.add_subcommand("synth", "Generate a synthetic repository with known answers");
    auto* report = app.add_subcommand("report", "Run every missing or stale stage");
    for (auto* cmd : { mine, trace, scan, analyze, stats, vdm, synth, report })
        add_common(cmd, config, cache_given);
    for (auto* cmd : { synth, report }) {
        cmd->add_option("--plan", config.plan, "Synthetic ground-truth plan (JSON)");
        cmd->add_flag("--table1", config.table1, "Use the built-in three-CVE fixture");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::CallForVersion&) {
        out << tool_version << '\n';
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "vercheck: " << e.what() << '\n';
        return exit_config;
    }

    apply_environment(config, cache_given);
    auto* command = app.get_subcommands().front();
    const std::string name = command->get_name();

    try {
        validate(config, name);
        if (name == "synth") {
            run_synth(config, config.out, err);
            return exit_ok;
        }
        fs::path truth;
        if (name == "report" && (config.table1 || !config.plan.empty())) {
            auto workdir = config.out / (config.table1 ? "fixture" : "synth");
            if (fs::exists(workdir / "repo")) {
                err << fmt::format("[synth] reusing {}\n", workdir.string());
                if (!config.table1)
                    truth = workdir / "truth.jsonl";
                config.repo = workdir / "repo";
                config.dataset = workdir / "dataset.jsonl";
                config.catalog = workdir / "catalog.json";
            } else {
                auto generated = run_synth(config, workdir, err);
                config.repo = generated.repo;
                config.dataset = generated.dataset;
                config.catalog = generated.catalog;
                truth = generated.truth;
            }
        }

        Driver driver(config, err);
        static const std::map<std::string, Stage> stages = { { "mine", Stage::mine }, { "trace", Stage::trace },
            { "scan", Stage::scan }, { "analyze", Stage::analyze }, { "stats", Stage::stats }, { "vdm", Stage::vdm } };
        if (name == "report") {
            driver.run_stale();
            if (!truth.empty())
                write_score(config.out, truth, err);
        } else {
            driver.run_stage(stages.at(name));
        }
        return exit_ok;
    } catch (const Error& e) {
        err << "vercheck: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "vercheck: internal error: " << e.what() << '\n';
        return exit_internal;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv;
    argv.push_back("vercheck");
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::string normalized_manifest(const fs::path& manifest_path)
{
    auto manifest = ordered_json::parse(read_file(manifest_path));
    manifest.erase("generated_at");
    return manifest.dump(2);
}

}
