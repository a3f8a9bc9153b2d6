#include "vercheck/vcs/annotate.hpp"

#include "vercheck/core/error.hpp"

#include <cctype>
#include <charconv>
#include <unordered_map>

#include <fmt/format.h>

namespace vercheck::vcs {

namespace {

std::string author_column(std::string_view author)
{
    if (author.empty())
        return "-";
    std::string out(author);
    for (auto& c : out) {
        if (std::isspace(static_cast<unsigned char>(c)))
            c = '_';
    }
    return out;
}

template<typename F>
void for_each_line(std::string_view text, F&& f)
{
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        f(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
}

}

std::string render_annotate(const std::vector<AnnotatedLine>& lines)
{
    std::string out;
    for (const auto& line : lines)
        out += fmt::format("{:>6} {:>10} {}\n", line.origin_rev.ordinal, author_column(line.author), line.text);
    return out;
}

std::vector<AnnotatedLine> parse_annotate(std::string_view text)
{
    std::vector<AnnotatedLine> result;
    for_each_line(text, [&](std::string_view row) {
        auto fail = [&](std::string_view why) {
            throw ParseError(fmt::format("annotate line {}: {}: '{}'", result.size() + 1, why, row));
        };
        auto rest = row;
        auto skip_spaces = [&] {
            while (!rest.empty() && rest.front() == ' ')
                rest.remove_prefix(1);
        };
        skip_spaces();
        if (!rest.empty() && rest.front() == 'r')
            rest.remove_prefix(1);
        std::uint64_t ordinal = 0;
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), ordinal);
        if (ec != std::errc {} || ptr == rest.data())
            fail("missing revision column");
        rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
        if (rest.empty() || rest.front() != ' ')
            fail("missing author column");
        skip_spaces();
        auto author_end = rest.find(' ');
        AnnotatedLine line;
        line.line_no = result.size() + 1;
        line.origin_rev = RevisionId { ordinal };
        line.author = std::string(rest.substr(0, author_end));
        if (line.author.empty())
            fail("missing author column");
        if (author_end != std::string_view::npos)
            line.text = std::string(rest.substr(author_end + 1));
        result.push_back(std::move(line));
    });
    return result;
}

std::vector<AnnotatedLine> parse_blame_porcelain(
    std::string_view text, const std::function<RevisionId(std::string_view)>& resolve)
{
    std::vector<AnnotatedLine> result;
    std::unordered_map<std::string, std::string> authors;
    std::string current_hash;
    std::uint64_t current_final = 0;
    bool expect_header = true;
    std::size_t row_no = 0;

    for_each_line(text, [&](std::string_view row) {
        ++row_no;
        auto fail = [&](std::string_view why) {
            throw ParseError(fmt::format("blame porcelain line {}: {}: '{}'", row_no, why, row));
        };
        if (expect_header) {
            auto sp1 = row.find(' ');
            if (sp1 == std::string_view::npos || sp1 < 4)
                fail("expected '<hash> <orig> <final>' header");
            current_hash = std::string(row.substr(0, sp1));
            auto rest = row.substr(sp1 + 1);
            auto sp2 = rest.find(' ');
            if (sp2 == std::string_view::npos)
                fail("missing final line number");
            rest = rest.substr(sp2 + 1);
            auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), current_final);
            if (ec != std::errc {})
                fail("bad final line number");
            expect_header = false;
            return;
        }
        if (!row.empty() && row.front() == '\t') {
            AnnotatedLine line;
            line.line_no = current_final;
            line.origin_rev = resolve(current_hash);
            auto author = authors.find(current_hash);
            line.author = author == authors.end() ? "-" : author->second;
            line.text = std::string(row.substr(1));
            if (line.line_no != result.size() + 1)
                fail("non-contiguous line numbers");
            result.push_back(std::move(line));
            expect_header = true;
            return;
        }
        if (row.substr(0, 7) == "author ")
            authors[current_hash] = author_column(row.substr(7));
    });
    if (!expect_header)
        throw ParseError("blame porcelain output truncated");
    return result;
}

}
