#include "vercheck/core/revision.hpp"

#include "vercheck/core/error.hpp"

#include <charconv>

#include <fmt/format.h>

namespace vercheck {

RevisionId RevisionId::parse(std::string_view text)
{
    auto digits = text;
    if (!digits.empty() && (digits.front() == 'r' || digits.front() == 'R'))
        digits.remove_prefix(1);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (digits.empty() || ec != std::errc {} || ptr != digits.data() + digits.size())
        throw ParseError(fmt::format("malformed revision '{}' (expected r<number>)", text));
    return RevisionId { value };
}

}
