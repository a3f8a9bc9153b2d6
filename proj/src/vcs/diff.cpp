#include "vercheck/vcs/diff.hpp"

#include "vercheck/core/error.hpp"

#include <charconv>

#include <fmt/format.h>

namespace vercheck::vcs {

namespace {

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

bool consume_number(std::string_view& s, std::uint64_t& out)
{
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc {} || ptr == s.data())
        return false;
    s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
    return true;
}

bool consume(std::string_view& s, std::string_view token)
{
    if (!starts_with(s, token))
        return false;
    s.remove_prefix(token.size());
    return true;
}

bool consume_range(std::string_view& s, std::uint64_t& start, std::uint64_t& len)
{
    if (!consume_number(s, start))
        return false;
    len = 1;
    if (consume(s, ","))
        return consume_number(s, len);
    return true;
}

std::string strip_path(std::string_view raw, char side_prefix)
{
    auto tab = raw.find('\t');
    if (tab != std::string_view::npos)
        raw = raw.substr(0, tab);
    if (raw == "/dev/null")
        return std::string(raw);
    if (raw.size() > 2 && raw[0] == side_prefix && raw[1] == '/')
        raw.remove_prefix(2);
    return std::string(raw);
}

std::string render_path(const std::string& path, char side_prefix)
{
    if (path == "/dev/null")
        return path;
    return fmt::format("{}/{}", side_prefix, path);
}

bool is_extended_header(std::string_view line)
{
    static constexpr std::string_view prefixes[] = { "index ", "old mode ", "new mode ", "deleted file mode ",
        "new file mode ", "similarity index ", "dissimilarity index ", "rename from ", "rename to ",
        "copy from ", "copy to ", "Only in " };
    for (auto prefix : prefixes) {
        if (starts_with(line, prefix))
            return true;
    }
    return false;
}

}

bool parse_hunk_header(std::string_view line, DiffHunk& hunk)
{
    if (!consume(line, "@@ -") || !consume_range(line, hunk.old_start, hunk.old_len) || !consume(line, " +")
        || !consume_range(line, hunk.new_start, hunk.new_len) || !consume(line, " @@"))
        return false;
    hunk.section.clear();
    if (consume(line, " "))
        hunk.section = std::string(line);
    else if (!line.empty())
        return false;
    return true;
}

std::vector<RemovedLine> removed_lines(const DiffHunk& hunk)
{
    std::vector<RemovedLine> result;
    auto old_no = hunk.old_start;
    for (const auto& line : hunk.lines) {
        if (line.tag == DiffLine::Tag::removed)
            result.push_back({ old_no, line.text });
        if (line.tag != DiffLine::Tag::added)
            ++old_no;
    }
    return result;
}

std::vector<FileDiff> parse_unified_diff(std::string_view text)
{
    std::vector<FileDiff> files;
    FileDiff* current = nullptr;
    bool saw_new_header = false;

    auto fail = [](std::size_t line_no, std::string_view line, std::string_view why) {
        throw ParseError(fmt::format("unified diff line {}: {}: '{}'", line_no, why, line));
    };
    auto start_file = [&]() {
        files.emplace_back();
        current = &files.back();
        saw_new_header = false;
    };

    std::size_t pos = 0;
    std::size_t line_no = 0;
    auto next_line = [&](std::string_view& line) {
        if (pos >= text.size())
            return false;
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        return true;
    };

    std::string_view line;
    while (next_line(line)) {
        if (starts_with(line, "diff ")) {
            start_file();
            continue;
        }
        if (starts_with(line, "--- ")) {
            if (current == nullptr || saw_new_header)
                start_file();
            current->old_path = strip_path(line.substr(4), 'a');
            std::string_view plus;
            if (!next_line(plus) || !starts_with(plus, "+++ "))
                fail(line_no, plus, "expected '+++' header");
            current->new_path = strip_path(plus.substr(4), 'b');
            saw_new_header = true;
            continue;
        }
        if (starts_with(line, "Binary files ") || starts_with(line, "GIT binary patch")) {
            if (current == nullptr)
                start_file();
            current->binary = true;
            if (starts_with(line, "Binary files ")) {
                auto body = line.substr(13);
                auto and_pos = body.find(" and ");
                auto differ_pos = body.rfind(" differ");
                if (and_pos != std::string_view::npos && differ_pos != std::string_view::npos && differ_pos > and_pos) {
                    current->old_path = strip_path(body.substr(0, and_pos), 'a');
                    current->new_path = strip_path(body.substr(and_pos + 5, differ_pos - and_pos - 5), 'b');
                }
            }
            continue;
        }
        if (starts_with(line, "\\ ")) {
            if (current == nullptr || current->hunks.empty() || current->hunks.back().lines.empty())
                fail(line_no, line, "no-newline marker without a preceding line");
            current->hunks.back().lines.back().missing_newline = true;
            continue;
        }
        if (starts_with(line, "@@ ")) {
            if (current == nullptr || !saw_new_header)
                fail(line_no, line, "hunk before file header");
            DiffHunk hunk;
            if (!parse_hunk_header(line, hunk))
                fail(line_no, line, "malformed hunk header");
            std::uint64_t old_seen = 0;
            std::uint64_t new_seen = 0;
            while (old_seen < hunk.old_len || new_seen < hunk.new_len) {
                std::string_view body;
                if (!next_line(body))
                    fail(line_no, line, "hunk truncated");
                if (starts_with(body, "\\ ")) {
                    if (hunk.lines.empty())
                        fail(line_no, body, "no-newline marker without a preceding line");
                    hunk.lines.back().missing_newline = true;
                    continue;
                }
                DiffLine dl;
                if (body.empty()) {
                    dl.tag = DiffLine::Tag::context;
                } else {
                    switch (body.front()) {
                    case ' ':
                        dl.tag = DiffLine::Tag::context;
                        break;
                    case '-':
                        dl.tag = DiffLine::Tag::removed;
                        break;
                    case '+':
                        dl.tag = DiffLine::Tag::added;
                        break;
                    default:
                        fail(line_no, body, "unexpected line inside hunk");
                    }
                    dl.text = std::string(body.substr(1));
                }
                if (dl.tag != DiffLine::Tag::added)
                    ++old_seen;
                if (dl.tag != DiffLine::Tag::removed)
                    ++new_seen;
                if (old_seen > hunk.old_len || new_seen > hunk.new_len)
                    fail(line_no, body, "hunk longer than its header");
                hunk.lines.push_back(std::move(dl));
            }
            current->hunks.push_back(std::move(hunk));
            continue;
        }
        if (is_extended_header(line) && current != nullptr)
            continue;
        fail(line_no, line, "unrecognized diff line");
    }
    return files;
}

std::string render_hunk(const DiffHunk& hunk)
{
    std::string out = fmt::format("@@ -{},{} +{},{} @@", hunk.old_start, hunk.old_len, hunk.new_start, hunk.new_len);
    if (!hunk.section.empty())
        out += " " + hunk.section;
    out += '\n';
    for (const auto& line : hunk.lines) {
        out += static_cast<char>(line.tag);
        out += line.text;
        out += '\n';
        if (line.missing_newline)
            out += "\\ No newline at end of file\n";
    }
    return out;
}

std::string render_unified_diff(const FileDiff& diff)
{
    if (diff.binary)
        return fmt::format("Binary files {} and {} differ\n", render_path(diff.old_path, 'a'), render_path(diff.new_path, 'b'));
    std::string out = fmt::format("--- {}\n+++ {}\n", render_path(diff.old_path, 'a'), render_path(diff.new_path, 'b'));
    for (const auto& hunk : diff.hunks)
        out += render_hunk(hunk);
    return out;
}

TextLines split_lines(std::string_view text)
{
    TextLines result;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            result.lines.emplace_back(text.substr(pos));
            result.trailing_newline = false;
            break;
        }
        result.lines.emplace_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return result;
}

std::string join_lines(const TextLines& lines)
{
    std::string out;
    for (std::size_t i = 0; i < lines.lines.size(); ++i) {
        out += lines.lines[i];
        if (i + 1 < lines.lines.size() || lines.trailing_newline)
            out += '\n';
    }
    return out;
}

TextLines apply_hunks(const TextLines& old_file, const std::vector<DiffHunk>& hunks)
{
    TextLines result;
    const auto& old = old_file.lines;
    std::size_t pos = 0;
    bool touched_end = false;
    bool end_missing_newline = false;

    for (const auto& hunk : hunks) {
        std::size_t start = hunk.old_len == 0 ? hunk.old_start : hunk.old_start - 1;
        if (start < pos || start > old.size())
            throw ParseError(fmt::format("hunk at old line {} out of order or out of range", hunk.old_start));
        result.lines.insert(result.lines.end(), old.begin() + static_cast<std::ptrdiff_t>(pos),
            old.begin() + static_cast<std::ptrdiff_t>(start));
        pos = start;
        bool last_new_missing = false;
        for (const auto& line : hunk.lines) {
            if (line.tag != DiffLine::Tag::added) {
                if (pos >= old.size() || old[pos] != line.text)
                    throw ParseError(fmt::format("hunk at old line {}: mismatch at old line {}", hunk.old_start, pos + 1));
                ++pos;
            }
            if (line.tag != DiffLine::Tag::removed) {
                result.lines.push_back(line.text);
                last_new_missing = line.missing_newline;
            }
        }
        if (pos == old.size()) {
            touched_end = true;
            end_missing_newline = last_new_missing;
        }
    }
    result.lines.insert(result.lines.end(), old.begin() + static_cast<std::ptrdiff_t>(pos), old.end());
    result.trailing_newline = touched_end ? !end_missing_newline : old_file.trailing_newline;
    if (result.lines.empty())
        result.trailing_newline = true;
    return result;
}

}
