#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace vercheck {

/// Calendar date (no time of day), stored as days since the Unix epoch.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days days)
        : m_days(days)
    {
    }

    /// Parses "YYYY-MM-DD". A trailing time component ("T..." or " ...") is ignored.
    static Date parse(std::string_view text);
    static Date from_unix_seconds(long long seconds);

    std::chrono::sys_days days() const { return m_days; }
    long long unix_seconds() const;
    std::string to_string() const;

    /// Signed number of days from `other` to this date.
    long long days_since(const Date& other) const;
    Date plus_days(long long days) const;

    friend constexpr auto operator<=>(const Date&, const Date&) = default;

private:
    std::chrono::sys_days m_days {};
};

}
