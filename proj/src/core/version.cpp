#include "vercheck/core/version.hpp"

#include "vercheck/core/error.hpp"

#include <algorithm>
#include <charconv>

#include <fmt/format.h>

namespace vercheck {

VersionId VersionId::parse(std::string_view text)
{
    if (text.empty())
        throw ParseError("empty version string");

    VersionId result;
    result.m_label = std::string(text);

    std::size_t start = 0;
    while (true) {
        auto dot = text.find('.', start);
        auto part = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        if (part.empty() || ec != std::errc {} || ptr != part.data() + part.size())
            throw ParseError(fmt::format("version '{}': component '{}' is not a non-negative integer", text, part));
        result.m_components.push_back(value);
        if (dot == std::string_view::npos)
            break;
        start = dot + 1;
    }
    return result;
}

std::strong_ordering operator<=>(const VersionId& a, const VersionId& b)
{
    auto n = std::max(a.m_components.size(), b.m_components.size());
    for (std::size_t i = 0; i < n; ++i) {
        auto x = i < a.m_components.size() ? a.m_components[i] : 0;
        auto y = i < b.m_components.size() ? b.m_components[i] : 0;
        if (auto c = x <=> y; c != 0)
            return c;
    }
    return std::strong_ordering::equal;
}

}
