#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vercheck::vcs {

struct DiffLine {
    enum class Tag : char { context = ' ', removed = '-', added = '+' };

    Tag tag = Tag::context;
    std::string text;
    bool missing_newline = false; // followed by "\ No newline at end of file"

    friend bool operator==(const DiffLine&, const DiffLine&) = default;
};

struct DiffHunk {
    std::uint64_t old_start = 0;
    std::uint64_t old_len = 0;
    std::uint64_t new_start = 0;
    std::uint64_t new_len = 0;
    std::string section; // text after the closing "@@", if any
    std::vector<DiffLine> lines;

    friend bool operator==(const DiffHunk&, const DiffHunk&) = default;
};

struct RemovedLine {
    std::uint64_t old_line_no = 0;
    std::string text;
};

/// Old-file line numbers of the removed lines, in increasing order.
std::vector<RemovedLine> removed_lines(const DiffHunk& hunk);

/// One file's section of a unified diff.
struct FileDiff {
    std::string old_path; // "/dev/null" for additions
    std::string new_path; // "/dev/null" for deletions
    bool binary = false;
    std::vector<DiffHunk> hunks;

    friend bool operator==(const FileDiff&, const FileDiff&) = default;
};

/// Parses "@@ -a[,b] +c[,d] @@[ section]". Returns false on malformed input.
bool parse_hunk_header(std::string_view line, DiffHunk& hunk);

/// Parses unified diff text (git or plain `diff -u`) into per-file sections.
/// Throws ParseError carrying the offending line.
std::vector<FileDiff> parse_unified_diff(std::string_view text);

/// Renders hunks back to unified diff text; parse_unified_diff inverts it.
std::string render_unified_diff(const FileDiff& diff);
std::string render_hunk(const DiffHunk& hunk);

/// Split a text file into lines. `trailing_newline` reports whether the last
/// line was newline-terminated.
struct TextLines {
    std::vector<std::string> lines;
    bool trailing_newline = true;

    friend bool operator==(const TextLines&, const TextLines&) = default;
};

TextLines split_lines(std::string_view text);
std::string join_lines(const TextLines& lines);

/// Applies hunks to the old file. Throws ParseError if a context or removed
/// line does not match.
TextLines apply_hunks(const TextLines& old_file, const std::vector<DiffHunk>& hunks);

}
