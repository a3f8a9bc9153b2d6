#include "driver.hpp"

#include "vercheck/analysis/error_analysis.hpp"
#include "vercheck/core/dataset_io.hpp"
#include "vercheck/core/error.hpp"
#include "vercheck/core/hash.hpp"
#include "vercheck/pipeline/report_io.hpp"
#include "vercheck/pipeline/verify.hpp"
#include "vercheck/stats/tests.hpp"
#include "vercheck/vdm/vdm.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace vercheck::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string_view stage_name(Stage stage)
{
    switch (stage) {
    case Stage::mine:
        return "mine";
    case Stage::trace:
        return "trace";
    case Stage::scan:
        return "scan";
    case Stage::analyze:
        return "analyze";
    case Stage::stats:
        return "stats";
    case Stage::vdm:
        break;
    }
    return "vdm";
}

void write_file_atomic(const fs::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ConfigError(fmt::format("cannot write '{}'", tmp.string()));
        out << content;
        if (!out.flush())
            throw ConfigError(fmt::format("write to '{}' failed", tmp.string()));
    }
    fs::rename(tmp, path);
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(fmt::format("cannot read '{}'", path.string()));
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string file_hash(const fs::path& path)
{
    return sha256_hex(read_file(path));
}

namespace {

constexpr const char* manifest_file = "manifest.json";

std::string artifact_list(const std::vector<std::string>& names)
{
    std::string out;
    for (const auto& n : names)
        out += (out.empty() ? "" : ", ") + n;
    return out;
}

ordered_json test_json(const stats::TestResult& r)
{
    ordered_json out;
    out["statistic"] = r.statistic;
    out["p_value"] = r.p_value;
    out["method"] = std::string(stats::to_string(r.method));
    out["alternative"] = std::string(stats::to_string(r.alternative));
    out["n"] = r.n;
    if (r.m)
        out["m"] = r.m;
    return out;
}

// Runs a test, turning analysis errors (degenerate samples) into a note.
template<typename F>
ordered_json guarded(F&& f)
{
    try {
        return test_json(f());
    } catch (const AnalysisError& e) {
        ordered_json out;
        out["error"] = e.what();
        return out;
    }
}

std::string csv_number(double v)
{
    return fmt::format("{:.10g}", v);
}

}

Driver::Driver(RunConfig config, std::ostream& log)
    : m_config(std::move(config))
    , m_log(log)
{
    if (m_config.jobs < 1)
        throw ConfigError("--jobs must be at least 1");
    if (m_config.vcs != "git")
        throw ConfigError(fmt::format("unsupported VCS '{}' (only git is available)", m_config.vcs));
    fs::create_directories(m_config.out);
    load_manifest();
}

void Driver::load_manifest()
{
    auto path = artifact(manifest_file);
    m_manifest = ordered_json::object();
    if (fs::exists(path)) {
        try {
            m_manifest = ordered_json::parse(read_file(path));
        } catch (const json::exception&) {
            m_log << "warning: ignoring unreadable manifest.json\n";
            m_manifest = ordered_json::object();
        }
    }
}

std::string Driver::config_hash() const
{
    // Only settings that change results take part.
    ordered_json c;
    c["vcs"] = m_config.vcs;
    c["patterns"] = m_config.patterns.empty() ? std::string("default") : file_hash(m_config.patterns);
    c["from_month"] = m_config.from_month;
    c["strict_er"] = m_config.strict_er;
    c["horizon_sweep"] = m_config.horizon_sweep;
    c["source_suffixes"] = m_config.source_suffixes;
    return sha256_hex(c.dump());
}

void Driver::save_manifest()
{
    ordered_json out;
    out["tool"] = "vercheck";
    out["version"] = tool_version;
    out["config_hash"] = config_hash();
    ordered_json stages = ordered_json::object();
    bool incomplete = false;
    if (m_manifest.contains("stages")) {
        for (auto stage : all_stages) {
            auto name = std::string(stage_name(stage));
            if (m_manifest["stages"].contains(name)) {
                stages[name] = m_manifest["stages"][name];
                if (!stages[name].value("complete", false))
                    incomplete = true;
            }
        }
    }
    out["stages"] = std::move(stages);
    out["incomplete"] = incomplete;
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc {};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
    out["generated_at"] = stamp;
    m_manifest = out;
    write_file_atomic(artifact(manifest_file), out.dump(2) + "\n");
}

void Driver::record_failure(Stage stage, const std::string& message)
{
    auto name = std::string(stage_name(stage));
    ordered_json entry;
    entry["complete"] = false;
    entry["error"] = message;
    if (!m_manifest.contains("stages"))
        m_manifest["stages"] = ordered_json::object();
    m_manifest["stages"][name] = entry;
    save_manifest();
}

const VersionCatalog& Driver::catalog()
{
    if (!m_catalog) {
        if (m_config.catalog.empty())
            throw ConfigError("--catalog is required");
        m_catalog = load_catalog(m_config.catalog);
    }
    return *m_catalog;
}

const Dataset& Driver::dataset()
{
    if (!m_dataset) {
        if (m_config.dataset.empty())
            throw ConfigError("--dataset is required");
        m_dataset = load_dataset(m_config.dataset, catalog());
    }
    return *m_dataset;
}

vcs::GitRepository& Driver::repo()
{
    if (!m_repo) {
        if (m_config.repo.empty())
            throw ConfigError("--repo is required");
        if (!fs::exists(m_config.repo))
            throw ConfigError(fmt::format("repository '{}' does not exist", m_config.repo.string()));
        vcs::GitCommands commands;
        if (!m_config.vcs_config.empty())
            commands = vcs::GitCommands::from_json_file(m_config.vcs_config);
        if (const char* git = std::getenv("VERCHECK_GIT"); git && *git)
            commands.binary = git;
        vcs::CommandCache cache;
        if (!m_config.cache_dir.empty())
            cache = vcs::CommandCache(m_config.cache_dir);
        m_repo = std::make_unique<vcs::GitRepository>(m_config.repo, std::move(commands), std::move(cache));
    }
    return *m_repo;
}

std::string Driver::repo_head()
{
    if (!m_head) {
        const auto& log = repo().log();
        m_head = log.empty() ? std::string("empty") : log.back().commit_id;
    }
    return *m_head;
}

fs::path Driver::require_artifact(const std::string& name, Stage producer) const
{
    auto path = artifact(name);
    if (!fs::exists(path))
        throw ConfigError(fmt::format("missing {} in '{}'; run `vercheck {}` first", name, m_config.out.string(),
            stage_name(producer)));
    return path;
}

Driver::Fingerprint Driver::inputs_of(Stage stage)
{
    Fingerprint f;
    auto add_file = [&](const std::string& key, const fs::path& path) {
        if (path.empty())
            throw ConfigError(fmt::format("--{} is required", key));
        f[key] = file_hash(path);
    };
    auto add_artifact = [&](const std::string& name, Stage producer) { f[name] = file_hash(require_artifact(name, producer)); };
    switch (stage) {
    case Stage::mine:
        add_file("dataset", m_config.dataset);
        add_file("catalog", m_config.catalog);
        f["patterns"] = m_config.patterns.empty() ? std::string("default") : file_hash(m_config.patterns);
        f["repo_head"] = repo_head();
        break;
    case Stage::trace:
        add_artifact("fixes.jsonl", Stage::mine);
        f["repo_head"] = repo_head();
        f["source_suffixes"] = json(m_config.source_suffixes).dump();
        break;
    case Stage::scan:
        add_file("dataset", m_config.dataset);
        add_file("catalog", m_config.catalog);
        add_artifact("fixes.jsonl", Stage::mine);
        add_artifact("trace.jsonl", Stage::trace);
        f["repo_head"] = repo_head();
        break;
    case Stage::analyze:
    case Stage::stats:
    case Stage::vdm:
        add_file("dataset", m_config.dataset);
        add_file("catalog", m_config.catalog);
        add_artifact("verification.jsonl", Stage::scan);
        f["strict_er"] = m_config.strict_er ? "true" : "false";
        if (stage == Stage::vdm) {
            f["from_month"] = std::to_string(m_config.from_month);
            f["horizon_sweep"] = m_config.horizon_sweep ? "true" : "false";
        }
        break;
    }
    return f;
}

std::vector<std::string> Driver::outputs_of(Stage stage) const
{
    switch (stage) {
    case Stage::mine:
        return { "fixes.jsonl", "mining.json" };
    case Stage::trace:
        return { "trace.jsonl" };
    case Stage::scan:
        return { "verification.jsonl", "verdicts.csv" };
    case Stage::analyze:
        return { "metrics.csv", "foundational.csv", "monthly.csv", "analysis.json" };
    case Stage::stats:
        return { "stats.json", "laplace.csv" };
    case Stage::vdm:
        break;
    }
    return { "vdm_fits.csv", "vdm_quality.csv", "vdm_compare.csv", "vdm.json" };
}

bool Driver::is_fresh(Stage stage)
{
    auto name = std::string(stage_name(stage));
    if (!m_manifest.contains("stages") || !m_manifest["stages"].contains(name))
        return false;
    const auto& entry = m_manifest["stages"][name];
    if (!entry.value("complete", false) || !entry.contains("outputs") || !entry.contains("inputs"))
        return false;
    for (const auto& output : outputs_of(stage)) {
        auto path = artifact(output);
        if (!fs::exists(path) || !entry["outputs"].contains(output) || entry["outputs"][output] != file_hash(path))
            return false;
    }
    Fingerprint inputs;
    try {
        inputs = inputs_of(stage);
    } catch (const ConfigError&) {
        return false; // an upstream artifact is missing
    }
    return ordered_json(inputs) == entry["inputs"];
}

void Driver::run_stale()
{
    for (auto stage : all_stages) {
        if (is_fresh(stage)) {
            m_log << fmt::format("[{}] up to date\n", stage_name(stage));
            continue;
        }
        run_stage(stage);
    }
}

void Driver::run_stage(Stage stage)
{
    auto inputs = inputs_of(stage);
    try {
        switch (stage) {
        case Stage::mine:
            mine();
            break;
        case Stage::trace:
            trace();
            break;
        case Stage::scan:
            scan();
            break;
        case Stage::analyze:
            analyze();
            break;
        case Stage::stats:
            stats();
            break;
        case Stage::vdm:
            vdm();
            break;
        }
    } catch (const std::exception& e) {
        record_failure(stage, e.what());
        throw;
    }

    ordered_json entry;
    entry["complete"] = true;
    entry["inputs"] = inputs;
    ordered_json outputs;
    for (const auto& output : outputs_of(stage))
        outputs[output] = file_hash(artifact(output));
    entry["outputs"] = outputs;
    if (stage == Stage::trace) {
        std::size_t partial = 0;
        std::ifstream in(artifact("trace.jsonl"));
        for (const auto& object : pipeline::read_json_lines(in))
            if (object.value("partial", false))
                ++partial;
        entry["partial_traces"] = partial;
    }
    if (!m_manifest.contains("stages"))
        m_manifest["stages"] = ordered_json::object();
    m_manifest["stages"][std::string(stage_name(stage))] = entry;
    save_manifest();
    m_log << fmt::format("[{}] wrote {}\n", stage_name(stage), artifact_list(outputs_of(stage)));
}

void Driver::mine()
{
    auto patterns = m_config.patterns.empty() ? pipeline::PatternSet::chrome_default()
                                              : pipeline::PatternSet::load(m_config.patterns);
    pipeline::MiningSummary summary;
    auto fixes = pipeline::mine(dataset(), repo(), patterns, &summary);

    std::ostringstream out;
    pipeline::write_json_lines(out, fixes);
    write_file_atomic(artifact("fixes.jsonl"), out.str());

    ordered_json s;
    s["commits_scanned"] = summary.commits_scanned;
    s["pattern_matches"] = summary.pattern_matches;
    s["fix_commits"] = summary.fix_commits;
    s["patterns"] = patterns.sources();
    write_file_atomic(artifact("mining.json"), s.dump(2) + "\n");
    m_log << fmt::format("[mine] {} commits scanned, {} fix commits\n", summary.commits_scanned, summary.fix_commits);
}

namespace {

std::vector<pipeline::FixCommit> load_fixes(const fs::path& path)
{
    std::ifstream in(path);
    std::vector<pipeline::FixCommit> out;
    for (const auto& object : pipeline::read_json_lines(in))
        out.push_back(pipeline::fix_commit_from_json(object));
    return out;
}

std::vector<pipeline::BacktraceResult> load_traces(const fs::path& path)
{
    std::ifstream in(path);
    std::vector<pipeline::BacktraceResult> out;
    for (const auto& object : pipeline::read_json_lines(in))
        out.push_back(pipeline::backtrace_from_json(object));
    return out;
}

std::vector<VerificationResult> load_results(const fs::path& path)
{
    std::ifstream in(path);
    std::vector<VerificationResult> out;
    for (const auto& object : pipeline::read_json_lines(in))
        out.push_back(pipeline::verification_from_json(object));
    return out;
}

std::string version_list(const VersionSet& versions)
{
    std::string out;
    for (const auto& v : versions)
        out += (out.empty() ? "" : " ") + v.label();
    return out;
}

}

void Driver::trace()
{
    auto fixes = load_fixes(require_artifact("fixes.jsonl", Stage::mine));
    pipeline::VerifyOptions options;
    options.jobs = m_config.jobs;
    options.backtrace.source_suffixes = m_config.source_suffixes;
    auto traces = pipeline::trace(repo(), fixes, options);
    std::ostringstream out;
    pipeline::write_json_lines(out, traces);
    write_file_atomic(artifact("trace.jsonl"), out.str());
}

void Driver::scan()
{
    auto fixes = load_fixes(require_artifact("fixes.jsonl", Stage::mine));
    auto traces = load_traces(require_artifact("trace.jsonl", Stage::trace));
    if (traces.size() != fixes.size())
        throw ConfigError("trace.jsonl does not match fixes.jsonl; rerun `vercheck trace`");
    pipeline::VerifyOptions options;
    options.jobs = m_config.jobs;
    auto results = pipeline::scan(dataset(), catalog(), repo(), fixes, traces, options);

    std::ostringstream out;
    pipeline::write_json_lines(out, results);
    write_file_atomic(artifact("verification.jsonl"), out.str());

    std::ostringstream table;
    table << "cve_id,status,reason,claimed_versions,verified_versions\n";
    std::map<std::string, const CveRecord*> records;
    for (const auto& r : dataset())
        records[r.cve_id] = &r;
    for (const auto& r : results) {
        auto claimed = version_list(records.at(r.cve_id)->claimed_versions);
        if (r.verifiable())
            table << fmt::format("{},verified,,{},{}\n", r.cve_id, claimed, version_list(r.verified_versions()));
        else
            table << fmt::format("{},unverifiable,{},{},\n", r.cve_id, to_string(std::get<Unverifiable>(r.status).reason), claimed);
    }
    write_file_atomic(artifact("verdicts.csv"), table.str());
    std::size_t verifiable = 0;
    for (const auto& r : results)
        verifiable += r.verifiable();
    m_log << fmt::format("[scan] {} CVEs, {} verifiable\n", results.size(), verifiable);
}

void Driver::analyze()
{
    auto results = load_results(require_artifact("verification.jsonl", Stage::scan));
    auto metrics = analysis::compute_metrics(results, dataset(), catalog(), m_config.strict_er);
    {
        std::ostringstream out;
        analysis::write_metrics_csv(out, metrics);
        write_file_atomic(artifact("metrics.csv"), out.str());
    }

    std::ostringstream foundational;
    foundational << "version,view,foundational,affecting,fraction\n";
    auto fraction = [](std::size_t a, std::size_t b) { return b ? fmt::format("{:.6f}", double(a) / double(b)) : std::string(); };
    for (const auto& m : metrics) {
        const auto& row = m.foundational;
        foundational << fmt::format("{},reported,{},{},{}\n", row.version.label(), row.reported, row.reported_affecting,
            fraction(row.reported, row.reported_affecting));
        for (auto view : { analysis::View::verifiable, analysis::View::verified }) {
            auto found = analysis::foundational_cves(results, dataset(), catalog(), row.version, view).size();
            auto affecting = analysis::affecting_cves(results, dataset(), row.version, view).size();
            foundational << fmt::format("{},{},{},{},{}\n", row.version.label(), analysis::to_string(view), found,
                affecting, fraction(found, affecting));
        }
    }
    write_file_atomic(artifact("foundational.csv"), foundational.str());

    std::vector<std::string> warnings;
    std::ostringstream monthly;
    monthly << "view,version,month,count,cumulative\n";
    auto horizon = analysis::dataset_horizon(dataset());
    auto dates = analysis::discovery_dates(dataset());
    if (!horizon) {
        warnings.push_back("no publication dates in the dataset, monthly series skipped");
    } else {
        for (auto view : { analysis::View::verifiable, analysis::View::verified }) {
            for (const auto& entry : catalog().official()) {
                auto cves = analysis::foundational_cves(results, dataset(), catalog(), entry.version, view);
                std::erase_if(cves, [&](const std::string& id) {
                    if (dates.contains(id))
                        return false;
                    warnings.push_back(fmt::format("{} has no publication date, left out of monthly series", id));
                    return true;
                });
                auto series = analysis::monthly_series(entry.version, cves, dates, entry.release_date, *horizon, &warnings);
                for (std::size_t i = 0; i < series.counts.size(); ++i)
                    monthly << fmt::format("{},{},{},{},{}\n", analysis::to_string(view), entry.version.label(), i,
                        series.counts[i], series.cumulative[i]);
            }
        }
    }
    write_file_atomic(artifact("monthly.csv"), monthly.str());

    auto rows = analysis::foundational_report(results, dataset(), catalog());
    auto averages = analysis::foundational_averages(rows);
    ordered_json summary;
    auto opt = [](const auto& v) -> ordered_json { return v ? ordered_json(*v) : ordered_json(nullptr); };
    auto ratio = [](const std::optional<analysis::Ratio>& r) -> ordered_json {
        if (!r)
            return nullptr;
        ordered_json o;
        o["exact"] = analysis::ratio_string(*r);
        o["value"] = analysis::ratio_value(*r);
        return o;
    };
    summary["strict_er"] = m_config.strict_er;
    summary["foundational_average_over_versions"] = { { "reported", opt(averages.reported_over_versions) },
        { "verified", opt(averages.verified_over_versions) } };
    summary["foundational_pooled"] = { { "reported", ratio(averages.reported_pooled) }, { "verified", ratio(averages.verified_pooled) } };
    summary["horizon"] = horizon ? ordered_json(horizon->to_string()) : ordered_json(nullptr);
    summary["warnings"] = warnings;
    write_file_atomic(artifact("analysis.json"), summary.dump(2) + "\n");
    m_log << fmt::format("[analyze] {} versions, {} warnings\n", metrics.size(), warnings.size());
}

void Driver::stats()
{
    auto results = load_results(require_artifact("verification.jsonl", Stage::scan));
    auto metrics = analysis::compute_metrics(results, dataset(), catalog(), m_config.strict_er);
    const double alpha = 0.05;
    const double threshold = 0.05;

    ordered_json out;
    out["alpha"] = alpha;

    // Hypothesis 1: the median error rate exceeds 5%.
    std::vector<double> er, er_prime;
    for (const auto& m : metrics) {
        if (m.er)
            er.push_back(analysis::ratio_value(*m.er));
        if (m.er_prime)
            er_prime.push_back(analysis::ratio_value(*m.er_prime));
    }
    ordered_json h1 = ordered_json::array();
    for (auto [name, values] : { std::pair { "ER", &er }, std::pair { "ER'", &er_prime } }) {
        ordered_json t;
        t["rate"] = name;
        t["mu0"] = threshold;
        t["versions"] = values->size();
        t["test"] = guarded([&] { return stats::wilcoxon_signed_rank(*values, threshold, stats::Alternative::greater); });
        h1.push_back(t);
    }
    out["hypothesis_1"] = h1;

    // Error categories: per-version rates compared pairwise.
    std::vector<double> p_rate, f_rate, b_rate;
    for (const auto& m : metrics) {
        auto denominator = m.n_verified + m.n_erroneous;
        if (denominator == 0)
            continue;
        p_rate.push_back(double(m.p_error) / double(denominator));
        f_rate.push_back(double(m.f_error) / double(denominator));
        b_rate.push_back(double(m.b_error) / double(denominator));
    }
    double corrected = stats::bonferroni(alpha, 2);
    ordered_json taxonomy;
    taxonomy["alpha"] = corrected;
    ordered_json comparisons = ordered_json::array();
    auto compare = [&](const char* a, const std::vector<double>& x, const char* b, const std::vector<double>& y) {
        ordered_json c;
        c["hypothesis"] = fmt::format("{} > {}", a, b);
        c["test"] = guarded([&] { return stats::wilcoxon_rank_sum(x, y, stats::Alternative::greater); });
        if (c["test"].contains("p_value"))
            c["significant"] = c["test"]["p_value"].get<double>() < corrected;
        comparisons.push_back(c);
    };
    compare("P-error", p_rate, "F-error", f_rate);
    compare("P-error", p_rate, "B-error", b_rate);
    compare("F-error", f_rate, "B-error", b_rate);
    taxonomy["comparisons"] = comparisons;
    out["taxonomy"] = taxonomy;

    // Foundational vulnerabilities, verifiable versus verified.
    std::vector<double> count_a, count_b, frac_a, frac_b;
    for (const auto& entry : catalog().official()) {
        auto fa = analysis::foundational_cves(results, dataset(), catalog(), entry.version, analysis::View::verifiable).size();
        auto fb = analysis::foundational_cves(results, dataset(), catalog(), entry.version, analysis::View::verified).size();
        auto aa = analysis::affecting_cves(results, dataset(), entry.version, analysis::View::verifiable).size();
        auto ab = analysis::affecting_cves(results, dataset(), entry.version, analysis::View::verified).size();
        count_a.push_back(double(fa));
        count_b.push_back(double(fb));
        if (aa)
            frac_a.push_back(double(fa) / double(aa));
        if (ab)
            frac_b.push_back(double(fb) / double(ab));
    }
    ordered_json foundational;
    foundational["counts"] = guarded([&] { return stats::wilcoxon_rank_sum(count_a, count_b, stats::Alternative::two_sided); });
    foundational["fractions"] = guarded([&] { return stats::wilcoxon_rank_sum(frac_a, frac_b, stats::Alternative::two_sided); });
    out["foundational"] = foundational;

    // Monthly discovery of foundational vulnerabilities and its trend.
    std::ostringstream laplace;
    laplace << "view,version,months,events,factor,trend\n";
    auto horizon = analysis::dataset_horizon(dataset());
    auto dates = analysis::discovery_dates(dataset());
    std::map<analysis::View, std::vector<double>> pooled;
    if (horizon) {
        for (auto view : { analysis::View::verifiable, analysis::View::verified }) {
            for (const auto& entry : catalog().official()) {
                auto cves = analysis::foundational_cves(results, dataset(), catalog(), entry.version, view);
                std::erase_if(cves, [&](const std::string& id) { return !dates.contains(id); });
                auto series = analysis::monthly_series(entry.version, cves, dates, entry.release_date, *horizon);
                std::uint64_t events = 0;
                for (auto c : series.counts) {
                    events += c;
                    pooled[view].push_back(double(c));
                }
                std::string factor, trend;
                if (events > 0 && series.counts.size() >= 2) {
                    double l = stats::laplace_factor(series.counts);
                    factor = csv_number(l);
                    trend = std::string(stats::to_string(stats::laplace_trend(l)));
                }
                laplace << fmt::format("{},{},{},{},{},{}\n", analysis::to_string(view), entry.version.label(),
                    series.counts.size(), events, factor, trend);
            }
        }
    }
    out["discovery"] = guarded([&] {
        return stats::wilcoxon_rank_sum(pooled[analysis::View::verifiable], pooled[analysis::View::verified],
            stats::Alternative::two_sided);
    });
    write_file_atomic(artifact("laplace.csv"), laplace.str());
    write_file_atomic(artifact("stats.json"), out.dump(2) + "\n");
    m_log << "[stats] hypothesis tests written\n";
}

void Driver::vdm()
{
    auto results = load_results(require_artifact("verification.jsonl", Stage::scan));
    auto horizon = analysis::dataset_horizon(dataset());
    auto dates = analysis::discovery_dates(dataset());

    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, std::vector<vdm::FitRecord>>> fits;
    std::vector<std::pair<std::string, std::vector<vdm::QualityPoint>>> curves;
    for (auto view : { analysis::View::verifiable, analysis::View::verified }) {
        std::vector<analysis::MonthlySeries> series;
        if (horizon) {
            for (const auto& entry : catalog().official()) {
                auto cves = analysis::affecting_cves(results, dataset(), entry.version, view);
                std::erase_if(cves, [&](const std::string& id) { return !dates.contains(id); });
                series.push_back(analysis::monthly_series(entry.version, cves, dates, entry.release_date, *horizon));
            }
        }
        auto records = vdm::fit_all(series, m_config.from_month, m_config.horizon_sweep, m_config.jobs);
        if (records.empty())
            warnings.push_back(fmt::format("{}: no series long enough to fit", analysis::to_string(view)));
        curves.emplace_back(std::string(analysis::to_string(view)), vdm::quality_curves(records));
        fits.emplace_back(std::string(analysis::to_string(view)), std::move(records));
    }

    std::ostringstream fit_csv, quality_csv, compare_csv;
    vdm::write_fits_csv(fit_csv, fits);
    vdm::write_quality_csv(quality_csv, curves);
    try {
        auto comparison = vdm::compare_datasets(fits[0].second, fits[1].second);
        vdm::write_comparison_csv(compare_csv, comparison);
        warnings.insert(warnings.end(), comparison.warnings.begin(), comparison.warnings.end());
    } catch (const AnalysisError& e) {
        compare_csv << "model,pairs,statistic,p_value,method,alternative\n";
        warnings.push_back(e.what());
    }
    write_file_atomic(artifact("vdm_fits.csv"), fit_csv.str());
    write_file_atomic(artifact("vdm_quality.csv"), quality_csv.str());
    write_file_atomic(artifact("vdm_compare.csv"), compare_csv.str());

    ordered_json summary;
    summary["from_month"] = m_config.from_month;
    summary["horizon_sweep"] = m_config.horizon_sweep;
    ordered_json models = ordered_json::array();
    for (const auto& model : vdm::model_registry())
        models.push_back({ { "name", model.name }, { "formula", model.formula }, { "params", model.param_names } });
    summary["models"] = models;
    summary["warnings"] = warnings;
    write_file_atomic(artifact("vdm.json"), summary.dump(2) + "\n");
    m_log << fmt::format("[vdm] {} + {} fits\n", fits[0].second.size(), fits[1].second.size());
}

}
