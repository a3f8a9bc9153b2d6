#include "vercheck/synth/table1.hpp"

#include "vercheck/core/catalog.hpp"
#include "vercheck/core/dataset_io.hpp"
#include "vercheck/core/error.hpp"
#include "vercheck/synth/history_builder.hpp"

#include <fstream>

#include <fmt/format.h>

namespace vercheck::synth {

namespace fs = std::filesystem;

namespace {

constexpr const char* url_fixer = "chrome/browser/net/url_fixer_upper.cc";
constexpr const char* media_bench = "media/tools/media_bench/media_bench.cc";
constexpr const char* string_util = "base/string_util.cc";

std::vector<std::string> numbered_file(const std::string& stem, int count)
{
    std::vector<std::string> lines;
    for (int i = 1; i <= count; ++i) {
        if (i % 17 == 0)
            lines.emplace_back("}");
        else if (i % 23 == 0)
            lines.emplace_back("");
        else
            lines.push_back(fmt::format("  {}_step({});", stem, i));
    }
    return lines;
}

// Spread the 2008-09..2012-06 period evenly over revisions 1..140000.
long long timestamp_of(std::uint64_t rev)
{
    constexpr long long start = 1220227200; // 2008-09-01
    constexpr long long end = 1338508800; // 2012-06-01
    return start + static_cast<long long>(rev) * (end - start) / 140000;
}

struct Release {
    const char* version;
    const char* date;
    std::uint64_t snapshot;
};

constexpr Release releases[] = {
    { "1.0", "2008-12-11", 1000 },
    { "2.0", "2009-05-21", 22000 },
    { "3.0", "2009-10-12", 27000 },
    { "4.0", "2010-01-25", 40000 },
    { "5.0", "2010-05-25", 54000 },
    { "6.0", "2010-09-02", 58000 },
    { "7.0", "2010-10-21", 62000 },
    { "8.0", "2010-12-02", 68000 },
    { "9.0", "2011-02-03", 72000 },
    { "10.0", "2011-03-08", 76000 },
    { "11.0", "2011-04-27", 82000 },
    { "12.0", "2011-06-07", 88000 },
    { "13.0", "2011-08-02", 94000 },
    { "14.0", "2011-09-16", 97000 },
    { "15.0", "2011-10-25", 102000 },
    { "16.0", "2011-12-13", 112000 },
    { "17.0", "2012-02-08", 120000 },
    { "18.0", "2012-03-28", 131000 },
};

}

Table1Fixture build_table1_fixture(const fs::path& workdir, const std::string& git)
{
    if (fs::exists(workdir) && !fs::is_empty(workdir))
        throw ConfigError(fmt::format("fixture directory '{}' is not empty", workdir.string()));
    fs::create_directories(workdir);

    HistoryBuilder history(true);
    auto commit = [&](std::uint64_t rev, const std::string& message, const char* author = "dev") {
        history.commit(rev, message, timestamp_of(rev), author);
    };

    auto url_lines = numbered_file("FixupURL", 600);
    url_lines[541] = "  if (!parts.scheme.is_valid()) return FixupPath(text);";
    history.write_file(url_fixer, url_lines);
    commit(15, "Initial import of the URL fixer.", "initial");

    history.write_file(string_util, numbered_file("StringUtil", 120));
    commit(500, "Add string utilities.");

    auto strings = history.file(string_util);
    strings[40] = "  StringUtil_step(41, kTrimWhitespace);";
    history.write_file(string_util, strings);
    commit(20000, "Trim whitespace in StringUtil.\n\nBUG=15000");

    auto media_lines = numbered_file("MediaBench", 400);
    media_lines[351] = "  int64 frame_time = av_frame_time(codec_context);";
    media_lines[352] = "  uint8* frame_buffer = new uint8[packet.size];";
    history.write_file(media_bench, media_lines);
    commit(26072, "Add media_bench tool.");

    url_lines[99] = "  FixupURL_step(100, kStrict);";
    history.write_file(url_fixer, url_lines);
    commit(30000, "Tighten URL fixup mode.");

    media_lines[352] = "  uint8* frame_buffer = new uint8[packet.size + kPadding];";
    history.write_file(media_bench, media_lines);
    commit(53193, "Pad the media_bench frame buffer.");

    strings[80] = "  StringUtil_step(81, kCaseSensitive);";
    history.write_file(string_util, strings);
    commit(60000, "Case-sensitive comparison in StringUtil.");

    media_lines[351] = "  int64 frame_time = SafeFrameTime(codec_context);";
    media_lines[352] = "  scoped_array<uint8> frame_buffer(new uint8[packet.size + kPadding]);";
    media_lines.insert(media_lines.begin() + 353, "  CHECK(frame_time >= 0);");
    history.write_file(media_bench, media_lines);
    commit(70413, "Fix out-of-bounds read in media_bench.\n\nBUG=68115\nTEST=media_bench --stream=bad.ogv");

    strings[90] = "  StringUtil_step(91, kLocaleAware);";
    history.write_file(string_util, strings);
    commit(80000, "Locale-aware StringUtil.\n\nBUG=99999");

    url_lines[541] = "  if (!parts.scheme.is_valid() || parts.scheme.len <= 0) return FixupPath(text);";
    history.write_file(url_fixer, url_lines);
    commit(95731, "Fix URL fixup with an empty scheme.\n\nBUG=72492\nTEST=unit_tests --gtest_filter=URLFixerUpper*");

    strings[10] = "  StringUtil_step(11, kFast);";
    history.write_file(string_util, strings);
    commit(100000, "Speed up StringUtil.");

    url_lines[200] = "  FixupURL_step(201, kLenient);";
    history.write_file(url_fixer, url_lines);
    commit(110000, "Relax URL fixup for intranet hosts.\n\nBUG=http://crbug.com/123456");

    strings[20] = "  StringUtil_step(21, kUnicode);";
    history.write_file(string_util, strings);
    commit(130000, "Unicode StringUtil.");

    Table1Fixture fixture { workdir / "repo", workdir / "dataset.jsonl", workdir / "catalog.json" };
    history.materialize(fixture.repo, git);

    std::vector<CatalogEntry> entries;
    for (const auto& release : releases)
        entries.push_back({ VersionId::parse(release.version), Date::parse(release.date), RevisionId { release.snapshot }, true });
    VersionCatalog catalog(std::move(entries));
    std::ofstream(fixture.catalog_path) << catalog_to_json(catalog).dump(2) << '\n';

    auto versions_through = [&](int last) {
        VersionSet set;
        for (int v = 1; v <= last; ++v)
            set.insert(VersionId::parse(fmt::format("{}.0", v)));
        return set;
    };
    Dataset dataset {
        { "CVE-2011-2822", versions_through(13), { 72492 }, Date::parse("2011-08-29") },
        { "CVE-2011-4080", versions_through(8), { 68115 }, Date::parse("2011-11-12") },
        { "CVE-2012-1521", versions_through(18), { 117110 }, Date::parse("2012-04-05") },
    };
    std::ofstream out(fixture.dataset_path);
    write_dataset(out, dataset);
    return fixture;
}

}
