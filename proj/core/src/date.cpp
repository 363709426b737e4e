#include "mfh/date.hpp"

#include <charconv>
#include <cstdio>

#include "mfh/error.hpp"

namespace mfh {

namespace {

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool valid(const Date& d) {
    return d.month >= 1 && d.month <= 12 && d.day >= 1 && d.day <= days_in_month(d.year, d.month);
}

}  // namespace

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap_year(year)) return 29;
    return kDays[month - 1];
}

bool Date::try_parse(std::string_view text, Date& out) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '"')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '"' || text.back() == '\r'))
        text.remove_suffix(1);

    Date d;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto slash2 = text.find('/', slash + 1);
        if (slash2 == std::string_view::npos) return false;
        if (!parse_int(text.substr(0, slash), d.month) ||
            !parse_int(text.substr(slash + 1, slash2 - slash - 1), d.day) ||
            !parse_int(text.substr(slash2 + 1), d.year))
            return false;
    } else {
        if (text.size() != 10 && text.size() != 7) return false;
        if (text[4] != '-') return false;
        if (!parse_int(text.substr(0, 4), d.year) || !parse_int(text.substr(5, 2), d.month))
            return false;
        if (text.size() == 10) {
            if (text[7] != '-' || !parse_int(text.substr(8, 2), d.day)) return false;
        }
    }
    if (!valid(d)) return false;
    out = d;
    return true;
}

Date Date::parse(std::string_view text) {
    Date d;
    if (!try_parse(text, d)) throw DataError("unparseable date '" + std::string(text) + "'");
    return d;
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

std::string Date::month_key() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

// Civil-from-days / days-from-civil after H. Hinnant's public domain algorithms.
long Date::days_since_epoch() const {
    const int y = year - (month <= 2 ? 1 : 0);
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned mp = static_cast<unsigned>(month + (month > 2 ? -3 : 9));
    const unsigned doy = (153 * mp + 2) / 5 + static_cast<unsigned>(day) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

Date Date::from_days(long z) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long y = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return Date{static_cast<int>(y + (m <= 2 ? 1 : 0)), static_cast<int>(m), static_cast<int>(d)};
}

int Date::weekday() const {
    // 1970-01-01 was a Thursday.
    long d = days_since_epoch();
    long w = (d + 3) % 7;
    if (w < 0) w += 7;
    return static_cast<int>(w);
}

}  // namespace mfh
