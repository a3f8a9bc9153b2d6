#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace vercheck {

/// A linearly numbered repository revision ("r95731").
struct RevisionId {
    std::uint64_t ordinal = 0;

    /// Accepts "r95731" or "95731".
    static RevisionId parse(std::string_view text);
    static RevisionId from_ordinal(std::uint64_t ordinal) { return RevisionId { ordinal }; }

    std::string label() const { return "r" + std::to_string(ordinal); }

    friend constexpr auto operator<=>(const RevisionId&, const RevisionId&) = default;
};

}
