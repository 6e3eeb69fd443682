#pragma once

#include <compare>
#include <optional>
#include <string>

namespace fss {

// Proleptic Gregorian calendar date. Day arithmetic goes through a serial
// day number so spell intersections are exact integer day counts.
struct Date {
    int year = 0;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;
};

bool is_leap_year(int year);
int days_in_month(int year, int month);
int days_in_year(int year);
bool is_valid_date(const Date& d);

// Days since 1970-01-01 (negative before). Howard Hinnant's civil algorithm.
long long serial_day(const Date& d);

// Parses strict ISO-8601 YYYY-MM-DD. Empty optional on malformed input.
std::optional<Date> parse_date(const std::string& text);
std::string format_date(const Date& d);

} // namespace fss
