#include "scratch.hpp"
#include "table1_check.hpp"

#include "vercheck/core/dataset_io.hpp"
#include "vercheck/core/error.hpp"
#include "vercheck/pipeline/backtrace.hpp"
#include "vercheck/pipeline/mining.hpp"
#include "vercheck/pipeline/report_io.hpp"
#include "vercheck/pipeline/scan.hpp"
#include "vercheck/pipeline/verify.hpp"
#include "vercheck/synth/history_builder.hpp"
#include "vercheck/synth/table1.hpp"
#include "vercheck/vcs/git_repository.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace vercheck;
using namespace vercheck::pipeline;

namespace {

vcs::CommitLogEntry entry(std::uint64_t rev, std::string message, std::vector<std::string> files = { "a.cc" })
{
    vcs::CommitLogEntry e;
    e.revision = RevisionId { rev };
    e.message = std::move(message);
    for (auto& f : files)
        e.changes.push_back({ 'M', f });
    return e;
}

// r1 creates vuln.cc and notes.txt, r2 adds util.cc, r3 is the fix, r4 an
// unrelated change.
struct SmallRepo {
    ScratchDir dir { "pipeline" };
    std::filesystem::path repo;

    SmallRepo()
    {
        synth::HistoryBuilder b;
        b.write_file("vuln.cc", { "int f(char* a, char* b) {", "  copy(a, b);", "  return 0;", "}" });
        b.write_file("notes.txt", { "doc" });
        b.write_file("guard.cc", { "bool g() {", "  return true;", "}" });
        b.commit(1, "create", 1262304000);
        b.write_file("util.cc", { "int u;" });
        b.commit(2, "util", 1262390400);
        b.write_file("vuln.cc", { "int f(char* a, char* b) {", "  copy_checked(a, b, n);", "  return 0;", "  {}" });
        b.write_file("notes.txt", { "doc2" });
        b.write_file("guard.cc", { "bool g() {", "  if (!ok) return false;", "  return true;", "}" });
        b.write_file("added.cc", { "int fresh;" });
        b.commit(3, "Fix copy\n\nBUG=42", 1262476800);
        b.write_file("util.cc", { "int u;", "int v;" });
        b.commit(4, "more util", 1262563200);
        repo = dir / "repo";
        b.materialize(repo);
    }
};

}

TEST_CASE("default patterns")
{
    auto p = PatternSet::chrome_default();
    CHECK(p.extract("Fix.\n\nBUG=72492\nTEST=none") == std::set<BugId> { 72492 });
    CHECK(p.extract("BUG=1,2,3") == std::set<BugId> { 1, 2, 3 });
    CHECK(p.extract("BUG=http://crbug.com/123456") == std::set<BugId> { 123456 });
    CHECK(p.extract("BUG=https://crbug.com/9\nBUG=10") == std::set<BugId> { 9, 10 });
    CHECK(p.extract("BUG=none").empty());
    CHECK(p.extract("no reference").empty());
    CHECK(p.extract("BUG=5,x") == std::set<BugId> { 5 });
}

TEST_CASE("custom patterns")
{
    auto p = PatternSet::from_strings({ R"(Fixes #(\d+))" });
    CHECK(p.extract("Fixes #12 and Fixes #13") == std::set<BugId> { 12, 13 });
    CHECK_THROWS_AS(PatternSet::from_strings({ "(" }), ConfigError);
    CHECK_THROWS_AS(PatternSet::from_strings({ "BUG=\\d+" }), ConfigError);

    ScratchDir dir("patterns");
    std::ofstream(dir / "p.json") << R"j(["Issue (\\d+)"])j";
    CHECK(PatternSet::load(dir / "p.json").extract("Issue 7") == std::set<BugId> { 7 });
    std::ofstream(dir / "bad.json") << R"({"x": 1})";
    CHECK_THROWS_AS(PatternSet::load(dir / "bad.json"), ConfigError);
    CHECK_THROWS_AS(PatternSet::load(dir / "missing.json"), ConfigError);
}

TEST_CASE("mining keeps only dataset bugs")
{
    std::vector<vcs::CommitLogEntry> log = {
        entry(1, "BUG=1"),
        entry(2, "BUG=2,3", { "x.cc", "y.h" }),
        entry(3, "no bug"),
        entry(4, "BUG=99"),
        entry(5, "BUG=3"),
    };
    MiningSummary summary;
    auto fixes = mine_fix_commits(log, { 3, 1 }, PatternSet::chrome_default(), &summary);
    REQUIRE(fixes.size() == 3);
    CHECK(fixes[0] == FixCommit { RevisionId { 1 }, { 1 }, { "a.cc" } });
    CHECK(fixes[1] == FixCommit { RevisionId { 2 }, { 3 }, { "x.cc", "y.h" } });
    CHECK(fixes[2].revision.ordinal == 5);
    CHECK(summary.commits_scanned == 5);
    CHECK(summary.pattern_matches == 4);
    CHECK(summary.fix_commits == 3);

    Dataset dataset { { "A", {}, { 1, 2 }, {} }, { "B", {}, { 2, 9 }, {} } };
    CHECK(dataset_bug_ids(dataset) == std::set<BugId> { 1, 2, 9 });
}

TEST_CASE("trivial lines")
{
    CHECK(is_trivial_line(""));
    CHECK(is_trivial_line("   \t"));
    CHECK(is_trivial_line("  {"));
    CHECK(is_trivial_line("}  "));
    CHECK_FALSE(is_trivial_line("};"));
    CHECK_FALSE(is_trivial_line("// comment"));
    CHECK_FALSE(is_trivial_line("{}"));
    CHECK(strip_trailing_whitespace("  x \t\r") == "  x");
}

TEST_CASE("backtrace of a fix commit")
{
    SmallRepo small;
    vcs::GitRepository repo(small.repo);
    FixCommit fix { RevisionId { 3 }, { 42 }, { "added.cc", "guard.cc", "notes.txt", "vuln.cc" } };

    auto all = backtrace(repo, fix);
    CHECK_FALSE(all.partial);
    REQUIRE(all.lines.size() == 2);
    CHECK(all.lines[0] == ResponsibleLine { "notes.txt", 1, "doc", RevisionId { 1 }, RevisionId { 3 } });
    // the removed "}" is trivial and is not traced
    CHECK(all.lines[1] == ResponsibleLine { "vuln.cc", 2, "  copy(a, b);", RevisionId { 1 }, RevisionId { 3 } });
    REQUIRE(all.markers.size() == 2);
    CHECK(all.markers[0] == AdditionOnlyMarker { "added.cc", RevisionId { 2 } });
    CHECK(all.markers[1] == AdditionOnlyMarker { "guard.cc", RevisionId { 2 } });

    auto sources = backtrace(repo, fix, BacktraceOptions { { ".cc" } });
    CHECK(sources.lines.size() == 1);
    CHECK(sources.markers.size() == 2);

    CHECK_THROWS_AS(backtrace(repo, FixCommit { RevisionId { 0 }, {}, {} }), AnalysisError);
}

TEST_CASE("scanning versions")
{
    SmallRepo small;
    vcs::GitRepository repo(small.repo);
    ResponsibleLine line { "vuln.cc", 2, "  copy(a, b);", RevisionId { 1 }, RevisionId { 3 } };
    AdditionOnlyMarker marker { "guard.cc", RevisionId { 2 } };
    AdditionOnlyMarker fresh { "added.cc", RevisionId { 2 } };
    std::vector<ResponsibleLine> lines { line };
    std::vector<AdditionOnlyMarker> markers { marker, fresh };

    auto before = scan_version(repo, { VersionId::parse("1.0"), RevisionId { 2 } }, lines, markers);
    REQUIRE(before.size() == 2);
    CHECK(before[0].matched_line_no == 2);
    CHECK(std::get<ResponsibleLine>(before[0].source) == line);
    CHECK(std::get<AdditionOnlyMarker>(before[1].source) == marker);
    CHECK(before[1].matched_line_no == 0);

    CHECK(scan_version(repo, { VersionId::parse("2.0"), RevisionId { 4 } }, lines, markers).empty());
}

TEST_CASE("verify assembles verdicts")
{
    SmallRepo small;
    vcs::GitRepository repo(small.repo);
    VersionCatalog catalog({
        { VersionId::parse("1.0"), Date::parse("2010-01-01"), RevisionId { 1 }, true },
        { VersionId::parse("1.5"), Date::parse("2010-01-02"), RevisionId { 2 }, false },
        { VersionId::parse("2.0"), Date::parse("2010-01-03"), RevisionId { 2 }, true },
        { VersionId::parse("3.0"), Date::parse("2010-01-05"), RevisionId { 4 }, true },
    });
    Dataset dataset {
        { "CVE-A", { VersionId::parse("1.0"), VersionId::parse("2.0"), VersionId::parse("3.0") }, { 42 }, {} },
        { "CVE-B", { VersionId::parse("1.0") }, {}, {} },
        { "CVE-C", { VersionId::parse("1.0") }, { 7 }, {} },
    };
    for (unsigned jobs : { 1u, 3u }) {
        VerifyOptions options;
        options.jobs = jobs;
        auto results = verify(dataset, catalog, repo, PatternSet::chrome_default(), options);
        REQUIRE(results.size() == 3);
        CHECK(results[0].cve_id == "CVE-A");
        CHECK(results[0].verified_versions() == VersionSet { VersionId::parse("1.0"), VersionId::parse("2.0") });
        CHECK(results[1].status == VerificationStatus { Unverifiable { UnverifiableReason::no_bug } });
        CHECK(results[2].status == VerificationStatus { Unverifiable { UnverifiableReason::no_commit } });
    }

    VersionCatalog broken({ { VersionId::parse("1.0"), Date::parse("2010-01-01"), RevisionId { 0 }, true } });
    CHECK_THROWS_AS(verify(dataset, broken, repo, PatternSet::chrome_default()), RepositoryError);
}

TEST_CASE("three Chromium worked examples")
{
    ScratchDir dir("table1");
    auto fixture = synth::build_table1_fixture(dir / "fx");
    auto catalog = load_catalog(fixture.catalog_path);
    auto dataset = load_dataset(fixture.dataset_path, catalog);
    vcs::GitRepository repo(fixture.repo);
    auto results = verify(dataset, catalog, repo, PatternSet::chrome_default());
    CHECK(table1::failure(results).empty());
    CHECK_THROWS_AS(synth::build_table1_fixture(dir / "fx"), ConfigError);
}

TEST_CASE("artifact records round trip")
{
    FixCommit fix { RevisionId { 95731 }, { 72492, 5 }, { "a.cc", "b.h" } };
    CHECK(fix_commit_from_json(nlohmann::json::parse(to_json(fix).dump())) == fix);

    BacktraceResult trace;
    trace.fix_rev = RevisionId { 95731 };
    trace.lines = { { "a.cc", 542, "  x;", RevisionId { 15 }, RevisionId { 95731 } } };
    trace.markers = { { "b.h", RevisionId { 95730 } } };
    trace.warnings = { "b.h: something" };
    trace.partial = true;
    CHECK(backtrace_from_json(nlohmann::json::parse(to_json(trace).dump())) == trace);

    VerificationResult verified { "CVE-1", Verified { { VersionId::parse("1.0"), VersionId::parse("2.0") } },
        { { VersionId::parse("1.0"), trace.lines[0], 542 }, { VersionId::parse("2.0"), trace.markers[0], 0 } }, { "w" } };
    CHECK(verification_from_json(nlohmann::json::parse(to_json(verified).dump())) == verified);

    VerificationResult empty { "CVE-2", Verified {}, {}, {} };
    CHECK(verification_from_json(nlohmann::json::parse(to_json(empty).dump())) == empty);

    VerificationResult unverifiable { "CVE-3", Unverifiable { UnverifiableReason::no_bug }, {}, {} };
    CHECK(verification_from_json(nlohmann::json::parse(to_json(unverifiable).dump())) == unverifiable);

    std::ostringstream out;
    write_json_lines(out, std::vector<FixCommit> { fix, fix });
    std::istringstream in(out.str() + "\n");
    CHECK(read_json_lines(in).size() == 2);

    std::istringstream bad("{}\n{oops\n");
    try {
        read_json_lines(bad);
        FAIL("accepted bad json");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}
