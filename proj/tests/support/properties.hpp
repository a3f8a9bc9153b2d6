#pragma once

#include "random_files.hpp"

#include "vercheck/vcs/annotate.hpp"
#include "vercheck/vcs/diff.hpp"
#include "vercheck/vcs/process.hpp"
#include "vercheck/vcs/repository.hpp"

#include <filesystem>
#include <fstream>
#include <string>

#include <fmt/format.h>

// Each check returns an empty string on success, otherwise a description.

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// Generates a file and an edit of it, diffs them with `diff -u`, and checks
// that parsing, rendering and reparsing is lossless and that applying the
// parsed hunks to the old file yields the new one.
inline std::string diff_round_trip_failure(FileGenerator& gen, const std::filesystem::path& dir)
{
    using namespace vercheck::vcs;
    auto old_file = gen.file();
    auto new_file = gen.edit(old_file);
    auto old_text = join_lines(old_file);
    auto new_text = join_lines(new_file);
    write_text(dir / "old.txt", old_text);
    write_text(dir / "new.txt", new_text);

    auto args = std::vector<std::string> { "-u", (dir / "old.txt").string(), (dir / "new.txt").string() };
    if (gen.pick(0, 3) == 0)
        args.insert(args.begin(), "-U" + std::to_string(gen.pick(0, 5)));
    auto result = run_process("diff", args);
    if (result.exit_code > 1)
        return "diff failed: " + result.err;

    auto parsed = parse_unified_diff(result.out);
    if (old_text == new_text)
        return parsed.empty() ? "" : "diff of identical files is not empty";
    if (parsed.size() != 1)
        return fmt::format("expected one file section, got {}", parsed.size());

    auto rendered = render_unified_diff(parsed.front());
    auto again = parse_unified_diff(rendered);
    if (again.size() != 1 || !(again.front() == parsed.front()))
        return "render/parse round trip changed the diff:\n" + result.out;
    if (render_unified_diff(again.front()) != rendered)
        return "rendering is not stable";

    auto applied = apply_hunks(split_lines(old_text), parsed.front().hunks);
    if (join_lines(applied) != new_text)
        return "applying the hunks did not reproduce the new file:\n" + result.out;
    return {};
}

inline std::string annotate_round_trip_failure(FileGenerator& gen)
{
    using namespace vercheck::vcs;
    auto lines = gen.annotation();
    auto text = render_annotate(lines);
    auto parsed = parse_annotate(text);
    if (parsed != lines)
        return "annotate round trip changed the lines:\n" + text;
    if (render_annotate(parsed) != text)
        return "annotate rendering is not stable";
    return {};
}

// For every commit and changed file, the diff against the previous state
// applied to the previous snapshot must give the new snapshot.
inline std::string patch_consistency_failure(vercheck::vcs::Repository& repo, std::size_t* checked = nullptr)
{
    using namespace vercheck::vcs;
    for (const auto& commit : repo.log()) {
        vercheck::RevisionId before { commit.revision.ordinal - 1 };
        for (const auto& file : commit.changed_files()) {
            auto old_text = repo.snapshot(file, before).value_or("");
            auto new_text = repo.snapshot(file, commit.revision).value_or("");
            auto diff = repo.diff(file, before, commit.revision);
            std::string applied;
            try {
                applied = join_lines(apply_hunks(split_lines(old_text), diff.hunks));
            } catch (const std::exception& e) {
                return fmt::format("{} at {}: {}", file, commit.revision.label(), e.what());
            }
            if (applied != new_text)
                return fmt::format("{} at {}: patched text differs from the snapshot", file, commit.revision.label());
            if (checked)
                ++*checked;
        }
    }
    return {};
}
