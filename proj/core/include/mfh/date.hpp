#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace mfh {

/// Calendar date without time zone. Parses ISO `YYYY-MM-DD`, `YYYY-MM`
/// (day defaults to 1) and the US `M/D/YYYY` form used by FRED-MD files.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    static Date parse(std::string_view text);
    static bool try_parse(std::string_view text, Date& out);

    std::string iso() const;
    /// `YYYY-MM`, the key used for monthly period assignment.
    std::string month_key() const;

    /// Days since 1970-01-01 (proleptic Gregorian).
    long days_since_epoch() const;
    static Date from_days(long days);
    int weekday() const;  // 0 = Monday ... 6 = Sunday

    auto operator<=>(const Date&) const = default;
};

bool is_leap_year(int year);
int days_in_month(int year, int month);

}  // namespace mfh
