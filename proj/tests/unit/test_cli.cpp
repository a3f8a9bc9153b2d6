#include "scratch.hpp"

#include "vercheck/cli/app.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using vercheck::cli::run;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    int code = run(args, out, err);
    return { code, out.str(), err.str() };
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}

TEST_CASE("usage errors")
{
    ScratchDir dir("cli-usage");
    CHECK(invoke({}).code == 2);
    CHECK(invoke({ "frobnicate" }).code == 2);
    CHECK(invoke({ "mine", "--no-such-flag" }).code == 2);
    CHECK(invoke({ "mine", "--jobs", "0" }).code == 2);

    auto missing = invoke({ "mine", "--repo", (dir / "nope").string() });
    CHECK(missing.code == 2);
    CHECK(missing.err.find("--repo") != std::string::npos);

    auto version = invoke({ "--version" });
    CHECK(version.code == 0);
    CHECK(version.out == std::string(vercheck::cli::tool_version) + "\n");

    CHECK(invoke({ "synth", "--out", (dir / "s").string() }).code == 2);
    CHECK(invoke({ "analyze", "--out", (dir / "a").string() }).code == 2);
}

TEST_CASE("report on the three-CVE fixture")
{
    ScratchDir dir("cli-table1");
    auto out = dir / "r";
    auto first = invoke({ "report", "--table1", "--out", out.string() });
    INFO(first.err);
    REQUIRE(first.code == 0);
    for (const char* name : { "fixes.jsonl", "trace.jsonl", "verification.jsonl", "verdicts.csv", "metrics.csv",
             "foundational.csv", "monthly.csv", "stats.json", "laplace.csv", "vdm_fits.csv", "vdm_quality.csv",
             "vdm_compare.csv", "manifest.json" })
        CHECK_MESSAGE(fs::is_regular_file(out / name), name);

    auto verdicts = slurp(out / "verdicts.csv");
    CHECK(verdicts.find("CVE-2011-4080,verified,,1.0 2.0 3.0 4.0 5.0 6.0 7.0 8.0,3.0 4.0 5.0 6.0 7.0 8.0\n") != std::string::npos);
    CHECK(verdicts.find("CVE-2012-1521,unverifiable,no_commit,") != std::string::npos);

    auto second = invoke({ "report", "--table1", "--out", out.string() });
    REQUIRE(second.code == 0);
    for (const char* stage : { "mine", "trace", "scan", "analyze", "stats", "vdm" })
        CHECK(second.err.find(std::string("[") + stage + "] up to date") != std::string::npos);

    // a changed option only reruns the stages that depend on it
    auto strict = invoke({ "report", "--table1", "--strict-er", "--out", out.string() });
    REQUIRE(strict.code == 0);
    CHECK(strict.err.find("[scan] up to date") != std::string::npos);
    CHECK(strict.err.find("[analyze] up to date") == std::string::npos);
}

TEST_CASE("separate report runs agree byte for byte")
{
    ScratchDir dir("cli-repeat");
    REQUIRE(invoke({ "report", "--table1", "--out", (dir / "a").string() }).code == 0);
    REQUIRE(invoke({ "report", "--table1", "--out", (dir / "b").string(), "--jobs", "3" }).code == 0);
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
        if (!entry.is_regular_file() || entry.path().filename() == "manifest.json")
            continue;
        CHECK_MESSAGE(slurp(entry.path()) == slurp(dir / "b" / entry.path().filename()), entry.path().filename());
        ++compared;
    }
    CHECK(compared >= 12);
    CHECK(vercheck::cli::normalized_manifest(dir / "a" / "manifest.json")
        == vercheck::cli::normalized_manifest(dir / "b" / "manifest.json"));
}

TEST_CASE("stages run one at a time")
{
    ScratchDir dir("cli-stages");
    auto fixture = dir / "fx";
    REQUIRE(invoke({ "synth", "--table1", "--out", fixture.string() }).code == 0);
    std::vector<std::string> inputs { "--repo", (fixture / "repo").string(), "--dataset", (fixture / "dataset.jsonl").string(),
        "--catalog", (fixture / "catalog.json").string(), "--out", (dir / "o").string() };
    auto with = [&](std::string command) {
        std::vector<std::string> args { std::move(command) };
        args.insert(args.end(), inputs.begin(), inputs.end());
        return invoke(args);
    };
    // a stage needs the artifacts of the one before
    auto early = with("scan");
    CHECK(early.code == 2);
    CHECK(early.err.find("fixes.jsonl") != std::string::npos);

    for (const char* stage : { "mine", "trace", "scan", "analyze", "stats", "vdm" }) {
        auto r = with(stage);
        INFO(stage << ": " << r.err);
        CHECK(r.code == 0);
    }
    CHECK(fs::is_regular_file(dir / "o" / "vdm.json"));
}

TEST_CASE("report on a synthetic plan writes a score")
{
    ScratchDir dir("cli-plan");
    std::ofstream(dir / "plan.json") << R"({"seed": 5, "versions": 6, "vulnerability_count": 8,
        "noise": {"p_stretch_past": 0.3, "p_future": 0.2, "p_beta": 0.1}})";
    auto r = invoke({ "report", "--plan", (dir / "plan.json").string(), "--out", (dir / "o").string() });
    INFO(r.err);
    REQUIRE(r.code == 0);
    auto score = slurp(dir / "o" / "score.json");
    CHECK(score.find("\"exact_match_rate\": 1.0") != std::string::npos);

    std::ofstream(dir / "bad.json") << R"({"versions": 0})";
    CHECK(invoke({ "synth", "--plan", (dir / "bad.json").string(), "--out", (dir / "b").string() }).code == 2);
}
