#include "vercheck/core/date.hpp"

#include "vercheck/core/error.hpp"

#include <charconv>

#include <fmt/format.h>

namespace vercheck {

namespace {

int parse_field(std::string_view text, std::string_view whole)
{
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc {} || ptr != text.data() + text.size())
        throw ParseError(fmt::format("malformed date '{}'", whole));
    return value;
}

}

Date Date::parse(std::string_view text)
{
    auto date_part = text.substr(0, text.find_first_of("T "));
    if (date_part.size() != 10 || date_part[4] != '-' || date_part[7] != '-')
        throw ParseError(fmt::format("malformed date '{}' (expected YYYY-MM-DD)", text));

    using namespace std::chrono;
    year_month_day ymd { year { parse_field(date_part.substr(0, 4), text) },
        month { static_cast<unsigned>(parse_field(date_part.substr(5, 2), text)) },
        day { static_cast<unsigned>(parse_field(date_part.substr(8, 2), text)) } };
    if (!ymd.ok())
        throw ParseError(fmt::format("invalid calendar date '{}'", text));
    return Date { sys_days { ymd } };
}

Date Date::from_unix_seconds(long long seconds)
{
    using namespace std::chrono;
    return Date { floor<std::chrono::days>(sys_seconds { std::chrono::seconds { seconds } }) };
}

long long Date::unix_seconds() const
{
    using namespace std::chrono;
    return duration_cast<seconds>(m_days.time_since_epoch()).count();
}

std::string Date::to_string() const
{
    std::chrono::year_month_day ymd { m_days };
    return fmt::format("{:04}-{:02}-{:02}", static_cast<int>(ymd.year()),
        static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

long long Date::days_since(const Date& other) const
{
    return (m_days - other.m_days).count();
}

Date Date::plus_days(long long days) const
{
    return Date { m_days + std::chrono::days { days } };
}

}
