#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace hhmem {

// Calendar date, minute precision. All corpus timestamps use the formats
// "YYYY-MM-DD HH:MM" (logs) and "YYYY-MM-DD" (session spans).
struct Timestamp {
    int year = 0;
    int month = 0;   // 1..12
    int day = 0;     // 1..days_in_month
    int hour = 0;    // 0..23
    int minute = 0;  // 0..59

    auto operator<=>(const Timestamp&) const = default;

    // Minutes since year 0, used as a total order and for arithmetic.
    std::int64_t to_minutes() const;

    std::string to_string() const;       // "YYYY-MM-DD HH:MM"
    std::string date_string() const;     // "YYYY-MM-DD"
};

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;

    Timestamp start_of_day() const { return {year, month, day, 0, 0}; }
    Timestamp end_of_day() const { return {year, month, day, 23, 59}; }
    std::string to_string() const;
};

int days_in_month(int year, int month);

// Both throw parse errors naming the offending text; `context` is prepended
// so callers can cite the session/entry.
Timestamp parse_timestamp(const std::string& text, const std::string& context);
Date parse_date(const std::string& text, const std::string& context);

}  // namespace hhmem
