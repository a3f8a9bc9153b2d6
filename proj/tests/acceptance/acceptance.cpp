// One PASS/FAIL line per acceptance criterion; non-zero exit on any failure.

#include "oracles.hpp"
#include "properties.hpp"
#include "random_files.hpp"
#include "scratch.hpp"
#include "synth_run.hpp"
#include "table1_check.hpp"
#include "twenty_table.hpp"
#include "vdm_cases.hpp"

#include "vercheck/cli/app.hpp"
#include "vercheck/core/dataset_io.hpp"
#include "vercheck/stats/tests.hpp"
#include "vercheck/synth/table1.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

namespace fs = std::filesystem;
using namespace vercheck;

namespace {

int failures = 0;

void criterion(int number, const std::string& title, double limit_seconds, const std::function<std::string()>& body)
{
    auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
        failure = body();
    } catch (const std::exception& e) {
        failure = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (failure.empty() && limit_seconds > 0 && seconds > limit_seconds)
        failure = fmt::format("took {:.1f} s, limit {:.0f} s", seconds, limit_seconds);
    if (!failure.empty())
        ++failures;
    std::cout << fmt::format("{} criterion {}: {} ({:.2f} s){}\n", failure.empty() ? "PASS" : "FAIL", number, title, seconds,
        failure.empty() ? "" : " - " + failure);
    std::cout.flush();
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string table1_verdicts()
{
    ScratchDir dir("acc-table1");
    auto fixture = synth::build_table1_fixture(dir / "fx");
    auto catalog = load_catalog(fixture.catalog_path);
    auto dataset = load_dataset(fixture.dataset_path, catalog);
    vcs::GitRepository repo(fixture.repo);
    return table1::failure(pipeline::verify(dataset, catalog, repo, pipeline::PatternSet::chrome_default()));
}

std::string synth_oracle()
{
    ScratchDir dir("acc-synth");
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        synth::GroundTruthPlan plan;
        plan.seed = seed;
        if (seed % 2)
            plan.noise = { 0.3, 0.2, 0.1 };
        if (seed % 3 == 0)
            plan.no_bug_fraction = plan.no_commit_fraction = 0.1;
        plan.collision_mode = seed % 5 == 0;
        auto run = run_plan(plan, dir / fmt::format("s{}", seed));
        if (run.score.exact_match_rate() != 1.0)
            return fmt::format("seed {}: exact match {}/{}", seed, run.score.exact_matches, run.score.cves);
    }

    CategoryCounts counts;
    for (std::uint64_t k = 0; k < 10; ++k) {
        synth::GroundTruthPlan plan;
        plan.seed = 1000 + k;
        plan.versions = 10;
        plan.commits_per_version = 40;
        plan.vulnerability_count = 100;
        plan.noise = { 0.3, 0.2, 0.1 };
        auto run = run_plan(plan, dir / fmt::format("n{}", k));
        if (run.score.exact_match_rate() != 1.0)
            return fmt::format("noise plan {}: exact match {}/{}", k, run.score.exact_matches, run.score.cves);
        count_categories(run, counts);
    }
    auto n = static_cast<double>(counts.cves);
    double p = counts.past / n, f = counts.future / n, b = counts.beta / n;
    std::cout << fmt::format("  measured over {} CVEs: P={:.3f} F={:.3f} B={:.3f}\n", counts.cves, p, f, b);
    if (counts.cves != 1000 || std::fabs(p - 0.3) > 0.05 || std::fabs(f - 0.2) > 0.05 || std::fabs(b - 0.1) > 0.05)
        return fmt::format("P={:.3f} F={:.3f} B={:.3f} over {} CVEs", p, f, b, counts.cves);
    return {};
}

std::string exact_rationals()
{
    if (auto f = table20::failure(); !f.empty())
        return f;
    std::mt19937_64 rng(5);
    auto catalog = table20::five_versions();
    for (int trial = 0; trial < 500; ++trial) {
        auto t = table20::random_table(rng);
        for (const auto& m : analysis::compute_metrics(t.results, t.dataset, catalog)) {
            if (m.er && m.er_prime && *m.er_prime > *m.er)
                return fmt::format("table {}: ER' > ER at {}", trial, m.version.label());
            if (m.p_error + m.f_error + m.b_error + m.other_error != m.n_erroneous)
                return fmt::format("table {}: taxonomy is not a partition at {}", trial, m.version.label());
        }
    }
    return {};
}

std::string statistics()
{
    using namespace stats;
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> d(-20, 20);
    auto sample = [&](std::size_t n) {
        std::vector<double> v(n);
        for (auto& x : v)
            x = d(rng) * 0.5;
        return v;
    };
    for (auto alt : { Alternative::greater, Alternative::less, Alternative::two_sided }) {
        for (std::size_t n = 1; n <= 10; ++n) {
            for (int trial = 0; trial < 20; ++trial) {
                auto v = sample(n);
                if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }))
                    continue;
                double got = wilcoxon_signed_rank(v, 0.0, alt, MethodChoice::exact).p_value;
                if (std::fabs(got - oracle::signed_rank_p(v, 0.0, alt)) > 1e-12)
                    return fmt::format("signed-rank n={} differs from enumeration", n);
            }
            for (std::size_t m = 1; m <= 10; ++m) {
                auto x = sample(n), y = sample(m);
                double got = wilcoxon_rank_sum(x, y, alt, MethodChoice::exact).p_value;
                if (std::fabs(got - oracle::rank_sum_p(x, y, alt)) > 1e-12)
                    return fmt::format("rank-sum n={} m={} differs from enumeration", n, m);
            }
        }
    }
    double all_positive = wilcoxon_signed_rank(std::vector<double> { 1, 2, 3, 4, 5, 6 }, 0.0, Alternative::greater).p_value;
    if (all_positive != 0.015625)
        return fmt::format("all-positive n=6 gives {}", all_positive);
    double separated = wilcoxon_rank_sum(std::vector<double> { 4, 5, 6 }, std::vector<double> { 1, 2, 3 }, Alternative::greater).p_value;
    if (std::fabs(separated - 0.05) > 1e-12)
        return fmt::format("separated 3 vs 3 gives {}", separated);
    if (bonferroni(0.05, 2) != 0.025)
        return "bonferroni(0.05, 2) != 0.025";
    double oracle_p = oracle::chi_square_tail(3.84, 1.0);
    double chi = chi_square_upper_tail(3.84, 1.0);
    if (std::fabs(oracle_p - 0.05) > 5e-4 || std::fabs(chi - 0.05) > 5e-4 || std::fabs(chi - oracle_p) > 1e-6)
        return fmt::format("chi-square(3.84, 1) = {} (integration {})", chi, oracle_p);
    return {};
}

std::string laplace()
{
    using stats::laplace_factor;
    if (laplace_factor(std::vector<std::uint64_t>(12, 7)) != 0.0)
        return "uniform counts give a non-zero factor";
    std::vector<std::uint64_t> last(12, 0);
    last.back() = 20;
    if (std::fabs(laplace_factor(last) - 7.1) > 0.01)
        return fmt::format("N=20 in the last month gives {}", laplace_factor(last));
    std::mt19937_64 rng(15);
    std::uniform_int_distribution<int> len(2, 40), count(0, 9);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::uint64_t> c(static_cast<std::size_t>(len(rng)));
        for (auto& x : c)
            x = static_cast<std::uint64_t>(count(rng));
        c[0] += 1;
        std::vector<std::uint64_t> reversed(c.rbegin(), c.rend());
        if (laplace_factor(reversed) != -laplace_factor(c))
            return fmt::format("series {} is not antisymmetric", trial);
    }
    return {};
}

std::string vdm_models()
{
    for (const auto& c : vdm_cases::exact_cases())
        if (auto f = vdm_cases::exact_recovery_failure(c); !f.empty())
            return f;
    auto d = vdm_cases::noisy_re_discrimination(100);
    std::cout << fmt::format("  noisy RE: RE quality {:.2f}, LN quality {:.2f}\n", d.re_quality, d.ln_quality);
    if (d.re_quality < 0.95 || d.ln_quality > 0.5)
        return fmt::format("RE quality {:.2f}, LN quality {:.2f}", d.re_quality, d.ln_quality);

    analysis::MonthlySeries s;
    s.version = VersionId::parse("1.0");
    s.t0 = Date::parse("2010-01-01");
    std::uint64_t prev = 0;
    for (int m = 1; m <= 30; ++m) {
        auto cur = static_cast<std::uint64_t>(std::round(60.0 * (1 - std::exp(-0.1 * m))));
        s.counts.push_back(cur - prev);
        s.cumulative.push_back(cur);
        prev = cur;
    }
    auto fits = vdm::fit_all({ s }, 6, true);
    auto cmp = vdm::compare_datasets(fits, fits);
    if (cmp.pooled.p_value != 1.0)
        return fmt::format("identical data sets give p = {}", cmp.pooled.p_value);
    return {};
}

std::string parsers()
{
    ScratchDir dir("acc-parsers");
    FileGenerator diffs(20240611);
    for (int i = 0; i < 1000; ++i)
        if (auto f = diff_round_trip_failure(diffs, dir.path()); !f.empty())
            return fmt::format("diff file {}: {}", i, f);
    FileGenerator annotations(77);
    for (int i = 0; i < 1000; ++i)
        if (auto f = annotate_round_trip_failure(annotations); !f.empty())
            return fmt::format("annotate file {}: {}", i, f);

    auto fixture = synth::build_table1_fixture(dir / "table1");
    vcs::GitRepository table1_repo(fixture.repo);
    if (auto f = patch_consistency_failure(table1_repo); !f.empty())
        return "three-CVE fixture: " + f;
    for (std::uint64_t seed : { 3, 4 }) {
        synth::GroundTruthPlan plan;
        plan.seed = seed;
        plan.collision_mode = seed == 3;
        plan.noise = { 0.3, 0.2, 0.1 };
        auto generated = synth::generate(plan, dir / fmt::format("synth{}", seed));
        vcs::GitRepository repo(generated.repo);
        if (auto f = patch_consistency_failure(repo); !f.empty())
            return fmt::format("synthetic seed {}: {}", seed, f);
    }
    return {};
}

std::string reproducible_reports()
{
    ScratchDir dir("acc-report");
    std::ofstream(dir / "plan.json") << R"({"seed": 12, "vulnerability_count": 20,
        "noise": {"p_stretch_past": 0.3, "p_future": 0.2, "p_beta": 0.1}})";
    std::vector<std::vector<std::string>> inputs { { "--table1" }, { "--plan", (dir / "plan.json").string() } };
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        std::vector<fs::path> outs { dir / fmt::format("{}a", k), dir / fmt::format("{}b", k) };
        for (const auto& out : outs) {
            std::vector<std::string> args { "report" };
            args.insert(args.end(), inputs[k].begin(), inputs[k].end());
            args.insert(args.end(), { "--out", out.string() });
            std::ostringstream o, e;
            if (int code = cli::run(args, o, e); code != 0)
                return fmt::format("report {} exited with {}: {}", inputs[k][0], code, e.str());
        }
        std::size_t compared = 0;
        for (const auto& entry : fs::directory_iterator(outs[0])) {
            if (!entry.is_regular_file() || entry.path().filename() == "manifest.json")
                continue;
            if (slurp(entry.path()) != slurp(outs[1] / entry.path().filename()))
                return fmt::format("{} differs between runs", entry.path().filename().string());
            ++compared;
        }
        if (compared < 12)
            return fmt::format("only {} artifacts compared", compared);
        if (cli::normalized_manifest(outs[0] / "manifest.json") != cli::normalized_manifest(outs[1] / "manifest.json"))
            return "manifests differ";
    }
    return {};
}

}

int main()
{
    criterion(1, "three-CVE fixture verdicts", 10, table1_verdicts);
    criterion(2, "synthetic oracle: exact matches and planted noise rates", 180, synth_oracle);
    criterion(3, "exact error rates, taxonomy and foundational fractions", 0, exact_rationals);
    criterion(4, "rank tests, Bonferroni and chi-square", 0, statistics);
    criterion(5, "Laplace factor", 0, laplace);
    criterion(6, "vulnerability discovery models", 120, vdm_models);
    criterion(7, "diff/annotate round trips and patch consistency", 0, parsers);
    criterion(8, "byte-identical reports", 0, reproducible_reports);
    return failures == 0 ? 0 : 1;
}
