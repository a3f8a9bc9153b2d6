#include "vercheck/synth/generator.hpp"

#include "vercheck/core/dataset_io.hpp"
#include "vercheck/core/error.hpp"
#include "vercheck/synth/history_builder.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace vercheck::synth {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr long long base_time = 1262304000; // 2010-01-01
constexpr long long seconds_per_rev = 7 * 86400;

long long time_of(std::uint64_t rev)
{
    return base_time + static_cast<long long>(rev) * seconds_per_rev;
}

Date date_of(std::uint64_t rev)
{
    return Date::from_unix_seconds(time_of(rev));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed)
        : m_engine(seed)
    {
    }

    // inclusive bounds
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi)
    {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(m_engine);
    }
    double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(m_engine); }
    bool chance(double p) { return unit() < p; }

private:
    std::mt19937_64 m_engine;
};

enum class Category { clean, past, future, beta };

std::string official_label(unsigned i) { return fmt::format("{}.0", i + 1); }
std::string beta_label(unsigned i) { return fmt::format("{}.5", i + 1); }

// Official version indices whose snapshot contains the vulnerability.
std::vector<unsigned> true_indices(const GroundTruthPlan& plan, const PlannedVulnerability& v)
{
    std::vector<unsigned> out;
    if (v.link != LinkKind::linked)
        return out;
    for (unsigned i = 0; i < plan.versions; ++i) {
        auto snap = plan.snapshot_rev(i);
        if (v.introduced_rev <= snap && snap < v.fixed_rev)
            out.push_back(i);
    }
    return out;
}

std::vector<unsigned> claimed_indices(const GroundTruthPlan& plan, const PlannedVulnerability& v)
{
    if (!v.claimed.empty())
        return v.claimed;
    return true_indices(plan, v);
}

void validate_shape(const GroundTruthPlan& plan)
{
    if (plan.versions < 1)
        throw ConfigError("plan: at least one version is required");
    if (plan.commits_per_version < 2)
        throw ConfigError("plan: commits_per_version must be at least 2");
    if (plan.files < 1 || plan.lines_per_file < 1)
        throw ConfigError("plan: files and lines_per_file must be positive");
}

void validate(const GroundTruthPlan& plan)
{
    validate_shape(plan);

    const auto total = plan.total_revisions();
    std::set<std::string> ids;
    std::set<BugId> bugs;
    std::set<std::uint64_t> fixes;
    for (const auto& v : plan.vulnerabilities) {
        if (v.cve_id.empty())
            throw ConfigError("plan: vulnerability without cve_id");
        if (!ids.insert(v.cve_id).second)
            throw ConfigError(fmt::format("plan: duplicate cve_id {}", v.cve_id));
        if (v.link != LinkKind::no_bug) {
            if (v.bug_id == 0)
                throw ConfigError(fmt::format("plan: {} needs a bug_id", v.cve_id));
            if (!bugs.insert(v.bug_id).second)
                throw ConfigError(fmt::format("plan: duplicate bug_id {}", v.bug_id));
        }
        for (auto index : v.claimed)
            if (index >= plan.versions)
                throw ConfigError(fmt::format("plan: {} claims version index {} beyond {}", v.cve_id, index, plan.versions));
        if (v.link == LinkKind::linked) {
            if (v.introduced_rev < 1 || v.introduced_rev >= v.fixed_rev || v.fixed_rev > total)
                throw ConfigError(fmt::format("plan: {} needs 1 <= introduced_rev < fixed_rev <= {}", v.cve_id, total));
            if (v.second_line_rev) {
                if (v.fix_style != FixStyle::modify)
                    throw ConfigError(fmt::format("plan: {} has a second line but is not a modify fix", v.cve_id));
                if (*v.second_line_rev <= v.introduced_rev || *v.second_line_rev >= v.fixed_rev)
                    throw ConfigError(fmt::format("plan: {} second_line_rev outside (introduced_rev, fixed_rev)", v.cve_id));
            }
            if (!fixes.insert(v.fixed_rev).second)
                throw ConfigError(fmt::format("plan: fixed_rev {} is shared", v.fixed_rev));
        }
        if (claimed_indices(plan, v).empty())
            throw ConfigError(fmt::format("plan: {} claims no version and has an empty truth", v.cve_id));
    }
    // Fix commits touch nothing else, so nothing may be introduced there.
    for (const auto& v : plan.vulnerabilities) {
        if (v.link != LinkKind::linked)
            continue;
        if (fixes.contains(v.introduced_rev) || (v.second_line_rev && fixes.contains(*v.second_line_rev)))
            throw ConfigError(fmt::format("plan: {} is introduced at a fix revision", v.cve_id));
    }
}

std::vector<unsigned> range(unsigned a, unsigned b)
{
    std::vector<unsigned> out;
    for (unsigned i = a; i <= b; ++i)
        out.push_back(i);
    return out;
}

struct Draft {
    Category category = Category::clean;
    unsigned first = 0; // truth range of official indices
    unsigned last = 0;
    unsigned beta_index = 0;
};

GroundTruthPlan draw(const GroundTruthPlan& plan)
{
    GroundTruthPlan out = plan;
    const unsigned V = plan.versions;
    const std::uint64_t G = plan.commits_per_version;
    const auto& noise = plan.noise;
    if (noise.p_stretch_past < 0 || noise.p_future < 0 || noise.p_beta < 0
        || noise.p_stretch_past + noise.p_future + noise.p_beta > 1.0 + 1e-12)
        throw ConfigError("plan: noise probabilities must be non-negative and sum to at most 1");
    if (plan.no_bug_fraction < 0 || plan.no_commit_fraction < 0 || plan.no_bug_fraction + plan.no_commit_fraction > 1.0)
        throw ConfigError("plan: unlinked fractions must be non-negative and sum to at most 1");

    Rng rng(plan.seed);
    std::set<std::uint64_t> used_fixes;
    std::vector<Draft> drafts;

    // Introductions are reserved as soon as they are drawn so that a later
    // fix cannot land on them.
    std::set<std::uint64_t> intros;
    auto draw_fix = [&](std::uint64_t lo, std::uint64_t hi) -> std::uint64_t {
        std::vector<std::uint64_t> free;
        for (auto r = lo; r <= hi; ++r)
            if (!used_fixes.contains(r) && !intros.contains(r))
                free.push_back(r);
        if (free.empty())
            throw ConfigError("plan: too many vulnerabilities for the number of commits");
        auto r = free[rng.between(0, free.size() - 1)];
        used_fixes.insert(r);
        return r;
    };
    auto draw_intro = [&](std::uint64_t lo, std::uint64_t hi) -> std::uint64_t {
        std::vector<std::uint64_t> free;
        for (auto r = lo; r <= hi; ++r)
            if (!used_fixes.contains(r))
                free.push_back(r);
        if (free.empty())
            throw ConfigError("plan: no free revision to introduce a vulnerability");
        auto r = free[rng.between(0, free.size() - 1)];
        intros.insert(r);
        return r;
    };

    for (unsigned k = 0; k < plan.vulnerability_count; ++k) {
        PlannedVulnerability v;
        v.cve_id = fmt::format("CVE-{}-{:05d}", 2010 + k / 90000, 10000 + k % 90000);
        v.bug_id = 10000 + k;
        double u = rng.unit();
        if (u < plan.no_bug_fraction)
            v.link = LinkKind::no_bug;
        else if (u < plan.no_bug_fraction + plan.no_commit_fraction)
            v.link = LinkKind::no_commit;
        if (v.link == LinkKind::no_bug)
            v.bug_id = 0;

        Draft d;
        if (v.link != LinkKind::linked) {
            auto a = static_cast<unsigned>(rng.between(0, V - 1));
            auto b = static_cast<unsigned>(rng.between(a, V - 1));
            v.claimed = range(a, b);
            out.vulnerabilities.push_back(std::move(v));
            drafts.push_back(d);
            continue;
        }

        double c = rng.unit();
        if (c < noise.p_beta)
            d.category = Category::beta;
        else if (c < noise.p_beta + noise.p_stretch_past && V >= 2)
            d.category = Category::past;
        else if (c < noise.p_beta + noise.p_stretch_past + noise.p_future && V >= 2)
            d.category = Category::future;

        v.fix_style = rng.chance(plan.addition_only_fraction) ? FixStyle::addition_only : FixStyle::modify;

        if (d.category == Category::beta) {
            // Lives only between two official snapshots, so no official
            // version contains it.
            d.beta_index = static_cast<unsigned>(rng.between(0, V - 1));
            auto lo = plan.snapshot_rev(d.beta_index);
            // the fix must leave a free revision between the snapshot and itself
            auto first_free = lo + 1;
            while (first_free < lo + G && used_fixes.contains(first_free))
                ++first_free;
            v.fixed_rev = draw_fix(first_free + 1, lo + G);
            v.introduced_rev = draw_intro(lo + 1, v.fixed_rev - 1);
        } else {
            unsigned lo_first = d.category == Category::past ? 1 : 0;
            unsigned hi_last = d.category == Category::future ? V - 2 : V - 1;
            d.first = static_cast<unsigned>(rng.between(lo_first, hi_last));
            d.last = static_cast<unsigned>(rng.between(d.first, hi_last));
            auto snap_last = plan.snapshot_rev(d.last);
            v.fixed_rev = draw_fix(snap_last + 1, snap_last + G);
            std::uint64_t lo = d.first == 0 ? 1 : plan.snapshot_rev(d.first - 1) + 1;
            v.introduced_rev = draw_intro(lo, plan.snapshot_rev(d.first));
        }
        out.vulnerabilities.push_back(std::move(v));
        drafts.push_back(d);
    }

    // Second lines and claims once every fix revision is known.
    for (std::size_t k = 0; k < out.vulnerabilities.size(); ++k) {
        auto& v = out.vulnerabilities[k];
        const auto& d = drafts[k];
        if (v.link != LinkKind::linked)
            continue;
        if (d.category == Category::beta) {
            // claim the neighbouring official release
            unsigned claimed = d.beta_index + 1 < V ? d.beta_index + 1 : d.beta_index;
            v.claimed = { claimed };
        } else {
            if (v.fix_style == FixStyle::modify && v.fixed_rev - v.introduced_rev >= 2 && rng.chance(plan.multi_line_fraction)) {
                std::vector<std::uint64_t> free;
                for (auto r = v.introduced_rev + 1; r < v.fixed_rev; ++r)
                    if (!used_fixes.contains(r))
                        free.push_back(r);
                if (!free.empty())
                    v.second_line_rev = free[rng.between(0, free.size() - 1)];
            }
            if (d.category == Category::past)
                v.claimed = range(static_cast<unsigned>(rng.between(0, d.first - 1)), d.last);
            else if (d.category == Category::future)
                v.claimed = range(d.first, static_cast<unsigned>(rng.between(d.last + 1, V - 1)));
        }
    }
    return out;
}

struct Line {
    std::string text;
    int owner = -1; // vulnerability index for planted lines
    std::uint64_t rev = 0;
};

class Writer {
public:
    Writer(const GroundTruthPlan& plan)
        : m_plan(plan)
        , m_rng(plan.seed ^ 0x9e3779b97f4a7c15ULL)
    {
    }

    HistoryBuilder build();

private:
    std::string filler(const std::string& stem)
    {
        auto id = m_counter++;
        static constexpr const char* forms[] = {
            "  {}_value_{} = Compute{}(input);",
            "  if (state_{} > {}) Update{}();",
            "  Log{}(\"step {}\", {});",
            "  total_{} += weight_{} * {};",
        };
        return fmt::format(fmt::runtime(forms[id % 4]), stem, id, id % 97);
    }

    void insert_filler(std::uint64_t rev);
    void modify_filler(std::uint64_t rev);
    void introduce(std::size_t k, std::uint64_t rev, bool second);
    void fix(std::size_t k, std::uint64_t rev);

    std::string base_file(std::size_t k) const { return fmt::format("src/module_{}.cc", k % m_plan.files); }
    std::string feature_file(std::size_t k) const { return fmt::format("src/feature_{}.cc", k); }

    const GroundTruthPlan& m_plan;
    Rng m_rng;
    std::uint64_t m_counter = 0;
    std::map<std::string, std::vector<Line>> m_files;
    std::set<std::string> m_touched;
};

void Writer::insert_filler(std::uint64_t rev)
{
    auto it = std::next(m_files.begin(), static_cast<long>(m_rng.between(0, m_files.size() - 1)));
    auto& lines = it->second;
    auto pos = static_cast<long>(m_rng.between(0, lines.size()));
    std::string text;
    double u = m_rng.unit();
    if (m_plan.collision_mode && u < 0.3) {
        // Copies go to other files only: a copy in the same file would let
        // the diff attribute the fix to either line.
        std::vector<const Line*> planted;
        for (const auto& [path, file] : m_files) {
            if (path == it->first)
                continue;
            for (const auto& line : file)
                if (line.owner >= 0 && line.rev < rev)
                    planted.push_back(&line);
        }
        if (!planted.empty())
            text = planted[m_rng.between(0, planted.size() - 1)]->text;
    }
    if (text.empty()) {
        if (u > 0.9)
            text = u > 0.95 ? "}" : "";
        else
            text = filler("extra");
    }
    lines.insert(lines.begin() + pos, Line { text, -1, rev });
    m_touched.insert(it->first);
}

void Writer::modify_filler(std::uint64_t rev)
{
    auto it = std::next(m_files.begin(), static_cast<long>(m_rng.between(0, m_files.size() - 1)));
    auto& lines = it->second;
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (lines[i].owner < 0 && lines[i].text.size() > 1)
            candidates.push_back(i);
    if (candidates.empty())
        return insert_filler(rev);
    auto& line = lines[candidates[m_rng.between(0, candidates.size() - 1)]];
    line = Line { filler("edit"), -1, rev };
    m_touched.insert(it->first);
}

void Writer::introduce(std::size_t k, std::uint64_t rev, bool second)
{
    const auto& v = m_plan.vulnerabilities[k];
    auto text = fmt::format("  CopyBuffer_{}_{}(dest, src, length{});", k, second ? 2 : 1, second ? " + offset" : "");
    if (v.fix_style == FixStyle::addition_only) {
        auto path = feature_file(k);
        std::vector<Line> lines;
        lines.push_back({ fmt::format("// feature {}", k), -1, rev });
        lines.push_back({ fmt::format("bool Feature{}::Handle(int index) {{", k), -1, rev });
        auto body = m_rng.between(4, 12);
        for (std::uint64_t i = 0; i < body; ++i)
            lines.push_back({ filler(fmt::format("feature{}", k)), -1, rev });
        lines.push_back({ "  return true;", -1, rev });
        lines.push_back({ "}", -1, rev });
        m_files[path] = std::move(lines);
        m_touched.insert(path);
        return;
    }
    auto path = base_file(k);
    auto& lines = m_files.at(path);
    auto pos = static_cast<long>(m_rng.between(0, lines.size()));
    lines.insert(lines.begin() + pos, Line { text, static_cast<int>(k), rev });
    m_touched.insert(path);
}

void Writer::fix(std::size_t k, std::uint64_t rev)
{
    const auto& v = m_plan.vulnerabilities[k];
    if (v.fix_style == FixStyle::addition_only) {
        auto path = feature_file(k);
        auto& lines = m_files.at(path);
        // guard goes inside the function body
        auto pos = static_cast<long>(m_rng.between(2, lines.size() - 2));
        lines.insert(lines.begin() + pos, Line { fmt::format("  if (!ValidateIndex_{}(index)) return false;", k), -1, rev });
        m_touched.insert(path);
        return;
    }
    auto path = base_file(k);
    auto& lines = m_files.at(path);
    auto first = std::find_if(lines.begin(), lines.end(), [&](const Line& l) { return l.owner == static_cast<int>(k); });
    if (first == lines.end())
        throw AnalysisError(fmt::format("generator lost the planted line of {}", v.cve_id));
    auto pos = first - lines.begin();
    std::erase_if(lines, [&](const Line& l) { return l.owner == static_cast<int>(k); });
    lines.insert(lines.begin() + pos, Line { fmt::format("  CopyBufferChecked_{}(dest, src, length, capacity);", k), -1, rev });
    m_touched.insert(path);
}

HistoryBuilder Writer::build()
{
    const auto total = m_plan.total_revisions();
    std::map<std::uint64_t, std::vector<std::pair<std::size_t, bool>>> intros;
    std::map<std::uint64_t, std::size_t> fixes;
    for (std::size_t k = 0; k < m_plan.vulnerabilities.size(); ++k) {
        const auto& v = m_plan.vulnerabilities[k];
        if (v.link != LinkKind::linked)
            continue;
        intros[v.introduced_rev].emplace_back(k, false);
        if (v.second_line_rev)
            intros[*v.second_line_rev].emplace_back(k, true);
        fixes[v.fixed_rev] = k;
    }

    HistoryBuilder history(false);
    for (std::uint64_t rev = 1; rev <= total; ++rev) {
        m_touched.clear();
        std::string message;
        if (rev == 1) {
            for (unsigned f = 0; f < m_plan.files; ++f) {
                std::vector<Line> lines;
                for (unsigned i = 0; i < m_plan.lines_per_file; ++i) {
                    if (i % 10 == 9)
                        lines.push_back({ "}", -1, rev });
                    else if (i % 10 == 0)
                        lines.push_back({ fmt::format("void Module{}::Step{}() {{", f, i / 10), -1, rev });
                    else
                        lines.push_back({ filler(fmt::format("module{}", f)), -1, rev });
                }
                m_files[fmt::format("src/module_{}.cc", f)] = std::move(lines);
                m_touched.insert(fmt::format("src/module_{}.cc", f));
            }
            message = "Initial import.";
        }

        if (auto it = fixes.find(rev); it != fixes.end()) {
            const auto& v = m_plan.vulnerabilities[it->second];
            fix(it->second, rev);
            switch (m_rng.between(0, 2)) {
            case 0:
                message = fmt::format("Fix bounds check in feature code.\n\nBUG={}", v.bug_id);
                break;
            case 1:
                message = fmt::format("Validate buffer lengths.\n\nBUG=http://crbug.com/{}\nTEST=unit_tests", v.bug_id);
                break;
            default:
                message = fmt::format("Harden copy routine.\n\nBUG={},{}", v.bug_id, 900000 + it->second);
                break;
            }
        } else {
            if (auto it = intros.find(rev); it != intros.end())
                for (auto [k, second] : it->second)
                    introduce(k, rev, second);
            if (rev != 1) {
                auto edits = m_rng.between(1, 2);
                for (std::uint64_t e = 0; e < edits; ++e) {
                    if (m_rng.chance(0.6))
                        insert_filler(rev);
                    else
                        modify_filler(rev);
                }
                message = m_rng.chance(0.2) ? fmt::format("Refactor helpers.\n\nBUG={}", 950000 + rev)
                                            : fmt::format("Routine change {}.", rev);
            }
        }

        for (const auto& path : m_touched) {
            std::vector<std::string> texts;
            texts.reserve(m_files.at(path).size());
            for (const auto& line : m_files.at(path))
                texts.push_back(line.text);
            history.write_file(path, texts);
        }
        history.commit(rev, message, time_of(rev));
    }
    return history;
}

VersionCatalog make_catalog(const GroundTruthPlan& plan)
{
    std::vector<CatalogEntry> entries;
    const auto half = plan.commits_per_version / 2;
    for (unsigned i = 0; i < plan.versions; ++i) {
        auto snap = plan.snapshot_rev(i);
        entries.push_back({ VersionId::parse(official_label(i)), date_of(snap).plus_days(1), RevisionId { snap }, true });
        if (plan.beta_versions) {
            auto beta = snap + half;
            entries.push_back({ VersionId::parse(beta_label(i)), date_of(beta).plus_days(1), RevisionId { beta }, false });
        }
    }
    return VersionCatalog(std::move(entries));
}

std::string_view fix_style_name(FixStyle style)
{
    return style == FixStyle::modify ? "modify" : "addition-only";
}

}

GroundTruthPlan realize_plan(const GroundTruthPlan& plan)
{
    validate_shape(plan);
    GroundTruthPlan out = plan.vulnerabilities.empty() ? draw(plan) : plan;
    validate(out);
    return out;
}

GeneratedRepository generate(const GroundTruthPlan& input, const fs::path& workdir, const std::string& git)
{
    auto plan = realize_plan(input);
    if (fs::exists(workdir) && !fs::is_empty(workdir))
        throw ConfigError(fmt::format("synth workdir '{}' is not empty", workdir.string()));

    GeneratedRepository out;
    out.catalog = make_catalog(plan);

    Rng dates(plan.seed ^ 0x5bd1e995ULL);
    for (std::size_t k = 0; k < plan.vulnerabilities.size(); ++k) {
        const auto& v = plan.vulnerabilities[k];
        CveRecord record;
        record.cve_id = v.cve_id;
        for (auto i : claimed_indices(plan, v))
            record.claimed_versions.insert(VersionId::parse(official_label(i)));
        if (v.link != LinkKind::no_bug)
            record.bug_ids.insert(v.bug_id);
        record.published = v.link == LinkKind::linked
            ? date_of(v.fixed_rev).plus_days(3)
            : date_of(dates.between(1, plan.total_revisions()));
        out.dataset.push_back(std::move(record));

        TruthRecord truth;
        truth.cve_id = v.cve_id;
        truth.fix_style = v.fix_style;
        truth.introduced_rev = v.introduced_rev;
        truth.fixed_rev = v.fixed_rev;
        if (v.link == LinkKind::linked) {
            Verified verified;
            auto t = true_indices(plan, v);
            for (auto i : t)
                verified.versions.insert(VersionId::parse(official_label(i)));
            auto claimed = claimed_indices(plan, v);
            truth.beta = t.empty();
            if (!t.empty()) {
                truth.stretched_past = std::any_of(claimed.begin(), claimed.end(), [&](unsigned i) { return i < t.front(); });
                truth.future = std::any_of(claimed.begin(), claimed.end(), [&](unsigned i) { return i > t.back(); });
            }
            truth.expected = std::move(verified);
        } else {
            truth.expected = Unverifiable { v.link == LinkKind::no_bug ? UnverifiableReason::no_bug : UnverifiableReason::no_commit };
        }
        out.truth.push_back(std::move(truth));
    }

    auto history = Writer(plan).build();

    fs::create_directories(workdir);
    out.repo = workdir / "repo";
    out.dataset_path = workdir / "dataset.jsonl";
    out.catalog_path = workdir / "catalog.json";
    out.truth_path = workdir / "truth.jsonl";
    history.materialize(out.repo, git);

    std::ofstream(out.catalog_path) << catalog_to_json(out.catalog).dump(2) << '\n';
    {
        std::ofstream dataset(out.dataset_path);
        write_dataset(dataset, out.dataset);
    }
    std::ofstream truth(out.truth_path);
    for (const auto& record : out.truth)
        truth << truth_to_json(record).dump() << '\n';
    return out;
}

ordered_json truth_to_json(const TruthRecord& record)
{
    ordered_json out;
    out["cve_id"] = record.cve_id;
    if (const auto* verified = std::get_if<Verified>(&record.expected)) {
        out["status"] = "verified";
        auto versions = ordered_json::array();
        for (const auto& v : verified->versions)
            versions.push_back(v.label());
        out["versions"] = std::move(versions);
    } else {
        out["status"] = "unverifiable";
        out["reason"] = std::string(to_string(std::get<Unverifiable>(record.expected).reason));
    }
    out["stretched_past"] = record.stretched_past;
    out["future"] = record.future;
    out["beta"] = record.beta;
    out["fix_style"] = std::string(fix_style_name(record.fix_style));
    out["introduced_rev"] = record.introduced_rev;
    out["fixed_rev"] = record.fixed_rev;
    return out;
}

TruthRecord truth_from_json(const json& object)
{
    try {
        TruthRecord record;
        record.cve_id = object.at("cve_id").get<std::string>();
        auto status = object.at("status").get<std::string>();
        if (status == "verified") {
            Verified verified;
            for (const auto& v : object.at("versions"))
                verified.versions.insert(VersionId::parse(v.get<std::string>()));
            record.expected = std::move(verified);
        } else if (status == "unverifiable") {
            auto reason = object.at("reason").get<std::string>();
            if (reason == "no_bug")
                record.expected = Unverifiable { UnverifiableReason::no_bug };
            else if (reason == "no_commit")
                record.expected = Unverifiable { UnverifiableReason::no_commit };
            else
                throw ParseError(fmt::format("truth: unknown reason '{}'", reason));
        } else {
            throw ParseError(fmt::format("truth: unknown status '{}'", status));
        }
        record.stretched_past = object.value("stretched_past", false);
        record.future = object.value("future", false);
        record.beta = object.value("beta", false);
        record.fix_style = object.value("fix_style", std::string("modify")) == "modify" ? FixStyle::modify : FixStyle::addition_only;
        record.introduced_rev = object.value("introduced_rev", std::uint64_t { 0 });
        record.fixed_rev = object.value("fixed_rev", std::uint64_t { 0 });
        return record;
    } catch (const json::exception& e) {
        throw ParseError(fmt::format("truth: {}", e.what()));
    }
}

std::vector<TruthRecord> load_truth(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot open truth file '{}'", path.string()));
    std::vector<TruthRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try {
            out.push_back(truth_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw ParseError(fmt::format("truth: {}", e.what()));
        }
    }
    return out;
}

}
