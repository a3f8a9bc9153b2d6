#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vercheck {

/// A dotted release version such as "3.0.195.24".
///
/// Ordering is lexicographic over the numeric components with missing
/// trailing components read as zero, so "3.0" and "3.0.0.0" compare equal
/// while "3.0" < "3.0.195.24" and "3.0" < "12.0".
class VersionId {
public:
    VersionId() = default;

    /// Throws ParseError naming the offending component.
    static VersionId parse(std::string_view text);

    const std::vector<std::uint64_t>& components() const { return m_components; }
    const std::string& label() const { return m_label; }

    friend std::strong_ordering operator<=>(const VersionId& a, const VersionId& b);
    friend bool operator==(const VersionId& a, const VersionId& b)
    {
        return (a <=> b) == std::strong_ordering::equal;
    }

private:
    std::vector<std::uint64_t> m_components;
    std::string m_label;
};

}
