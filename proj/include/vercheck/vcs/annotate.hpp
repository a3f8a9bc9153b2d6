#pragma once

#include "vercheck/core/revision.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace vercheck::vcs {

struct AnnotatedLine {
    std::uint64_t line_no = 0;
    RevisionId origin_rev;
    std::string author;
    std::string text;

    friend bool operator==(const AnnotatedLine&, const AnnotatedLine&) = default;
};

/// Normalized annotate text: one "<rev> <author> <text>" row per physical
/// line, columns right-aligned as `svn blame` does. The author column never
/// contains whitespace; the text column is kept verbatim.
std::string render_annotate(const std::vector<AnnotatedLine>& lines);
std::vector<AnnotatedLine> parse_annotate(std::string_view text);

/// `git blame --porcelain` output. `resolve` maps a commit hash to its
/// linear revision ordinal.
std::vector<AnnotatedLine> parse_blame_porcelain(
    std::string_view text, const std::function<RevisionId(std::string_view)>& resolve);

}
