#include "hhmem/timeutil.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "hhmem/errors.hpp"

namespace hhmem {

namespace {

bool is_leap(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int parse_int_field(const std::string& text, size_t pos, size_t len,
                    const std::string& context) {
    if (pos + len > text.size()) {
        throw parse_error(context + ": truncated date/time '" + text + "'");
    }
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, value);
    if (ec != std::errc() || ptr != text.data() + pos + len) {
        throw parse_error(context + ": non-numeric field in '" + text + "'");
    }
    return value;
}

void expect_char(const std::string& text, size_t pos, char c, const std::string& context) {
    if (pos >= text.size() || text[pos] != c) {
        throw parse_error(context + ": malformed date/time '" + text + "'");
    }
}

}  // namespace

int days_in_month(int year, int month) {
    static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap(year)) return 29;
    return kDays[static_cast<size_t>(month - 1)];
}

std::int64_t Timestamp::to_minutes() const {
    // Days since a fixed epoch via a simple year/month walk; inputs are
    // validated so the ranges stay tiny.
    std::int64_t days = 0;
    for (int y = 1970; y < year; ++y) days += is_leap(y) ? 366 : 365;
    for (int m = 1; m < month; ++m) days += days_in_month(year, m);
    days += day - 1;
    return ((days * 24) + hour) * 60 + minute;
}

std::string Timestamp::to_string() const {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d %02d:%02d", year, month, day, hour, minute);
    return buf;
}

std::string Timestamp::date_string() const {
    char buf[12];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

std::string Date::to_string() const {
    char buf[12];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date parse_date(const std::string& text, const std::string& context) {
    if (text.size() != 10) {
        throw parse_error(context + ": expected YYYY-MM-DD, got '" + text + "'");
    }
    Date d;
    d.year = parse_int_field(text, 0, 4, context);
    expect_char(text, 4, '-', context);
    d.month = parse_int_field(text, 5, 2, context);
    expect_char(text, 7, '-', context);
    d.day = parse_int_field(text, 8, 2, context);
    if (d.month < 1 || d.month > 12) {
        throw parse_error(context + ": month out of range in '" + text + "'");
    }
    if (d.day < 1 || d.day > days_in_month(d.year, d.month)) {
        throw parse_error(context + ": day out of range in '" + text + "'");
    }
    return d;
}

Timestamp parse_timestamp(const std::string& text, const std::string& context) {
    if (text.size() != 16) {
        throw parse_error(context + ": expected YYYY-MM-DD HH:MM, got '" + text + "'");
    }
    Date d = parse_date(text.substr(0, 10), context);
    expect_char(text, 10, ' ', context);
    Timestamp ts;
    ts.year = d.year;
    ts.month = d.month;
    ts.day = d.day;
    ts.hour = parse_int_field(text, 11, 2, context);
    expect_char(text, 13, ':', context);
    ts.minute = parse_int_field(text, 14, 2, context);
    if (ts.hour < 0 || ts.hour > 23 || ts.minute < 0 || ts.minute > 59) {
        throw parse_error(context + ": time out of range in '" + text + "'");
    }
    return ts;
}

}  // namespace hhmem
