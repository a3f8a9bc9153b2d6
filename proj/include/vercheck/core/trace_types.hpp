#pragma once

#include "vercheck/core/revision.hpp"

#include <cstdint>
#include <string>
#include <variant>

namespace vercheck {

/// A removed line of a fix diff, annotated with the revision that introduced it.
struct ResponsibleLine {
    std::string file;
    std::uint64_t line_no = 0; // in r_fixed - 1
    std::string content; // trailing whitespace stripped
    RevisionId origin_rev;
    RevisionId fix_rev;

    friend bool operator==(const ResponsibleLine&, const ResponsibleLine&) = default;
};

/// Emitted for a file whose fix only added code.
struct AdditionOnlyMarker {
    std::string file;
    RevisionId pre_fix_rev;

    friend bool operator==(const AdditionOnlyMarker&, const AdditionOnlyMarker&) = default;
};

using TraceItem = std::variant<ResponsibleLine, AdditionOnlyMarker>;

}
