#include "umet/time.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "umet/errors.hpp"

namespace umet {

namespace {

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 + static_cast<unsigned>(d) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

int to_int(std::string_view s, const char* what) {
    int value = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw InputError(std::string("bad ") + what + " in timestamp");
    return value;
}

Instant parse_rfc3339(std::string_view s) {
    // YYYY-MM-DDTHH:MM:SS[.frac][Z|+hh:mm|-hh:mm]
    if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != 't' && s[10] != ' ') ||
        s[13] != ':' || s[16] != ':')
        throw InputError("malformed RFC 3339 timestamp: " + std::string(s));
    const int year = to_int(s.substr(0, 4), "year");
    const int month = to_int(s.substr(5, 2), "month");
    const int day = to_int(s.substr(8, 2), "day");
    const int hour = to_int(s.substr(11, 2), "hour");
    const int minute = to_int(s.substr(14, 2), "minute");
    const int second = to_int(s.substr(17, 2), "second");
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60)
        throw InputError("out-of-range field in timestamp: " + std::string(s));

    std::size_t pos = 19;
    std::int64_t frac_ms = 0;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw InputError("empty fractional seconds: " + std::string(s));
        std::string_view frac = s.substr(start, pos - start);
        // Truncate to millisecond resolution.
        std::int64_t scale = 100;
        for (std::size_t i = 0; i < frac.size() && scale > 0; ++i, scale /= 10)
            frac_ms += (frac[i] - '0') * scale;
    }

    std::int64_t offset_min = 0;
    if (pos < s.size()) {
        const char c = s[pos];
        if (c == 'Z' || c == 'z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            if (pos + 6 > s.size() || s[pos + 3] != ':')
                throw InputError("malformed timezone offset: " + std::string(s));
            const int oh = to_int(s.substr(pos + 1, 2), "offset hour");
            const int om = to_int(s.substr(pos + 4, 2), "offset minute");
            offset_min = static_cast<std::int64_t>(oh) * 60 + om;
            if (c == '-') offset_min = -offset_min;
            pos += 6;
        }
    }
    if (pos != s.size()) throw InputError("trailing characters in timestamp: " + std::string(s));

    const std::int64_t days = days_from_civil(year, month, day);
    std::int64_t sec = days * 86400 + hour * 3600 + minute * 60 + second;
    sec -= offset_min * 60;
    return Instant{sec * 1000 + frac_ms};
}

}  // namespace

Instant parse_instant(std::string_view text) {
    if (text.empty()) throw InputError("empty timestamp");
    if (text.find('T') != std::string_view::npos || text.find('t') != std::string_view::npos ||
        text.find(':') != std::string_view::npos)
        return parse_rfc3339(text);

    // Numeric epoch seconds, optionally fractional.
    std::string buf(text);
    char* end = nullptr;
    const double sec = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || !std::isfinite(sec))
        throw InputError("unparseable timestamp: " + std::string(text));
    return Instant{static_cast<std::int64_t>(std::llround(sec * 1000.0))};
}

std::string format_instant(Instant t) {
    const bool neg = t.ms < 0;
    const std::uint64_t mag = neg ? ~static_cast<std::uint64_t>(t.ms) + 1 : static_cast<std::uint64_t>(t.ms);
    const std::uint64_t sec = mag / 1000;
    const std::uint64_t rem = mag % 1000;
    char buf[40];
    if (rem == 0)
        std::snprintf(buf, sizeof(buf), "%s%llu", neg ? "-" : "", static_cast<unsigned long long>(sec));
    else
        std::snprintf(buf, sizeof(buf), "%s%llu.%03llu", neg ? "-" : "", static_cast<unsigned long long>(sec),
                      static_cast<unsigned long long>(rem));
    return buf;
}

Duration parse_duration(std::string_view text) {
    if (text.empty()) throw ConfigError("empty duration");
    std::size_t unit_pos = text.size();
    while (unit_pos > 0 && !std::isdigit(static_cast<unsigned char>(text[unit_pos - 1]))) --unit_pos;
    const std::string_view digits = text.substr(0, unit_pos);
    const std::string_view unit = text.substr(unit_pos);
    if (!all_digits(digits)) throw ConfigError("unparseable duration: " + std::string(text));

    std::int64_t count = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), count);
    if (ec != std::errc{} || p != digits.data() + digits.size())
        throw ConfigError("unparseable duration: " + std::string(text));

    if (unit.empty() || unit == "s") return seconds(count);
    if (unit == "ms") return milliseconds(count);
    if (unit == "m") return minutes(count);
    if (unit == "h") return hours(count);
    if (unit == "d") return days(count);
    throw ConfigError("unknown duration unit '" + std::string(unit) + "' in " + std::string(text));
}

std::string format_duration(Duration d) {
    const std::int64_t ms = d.ms;
    char buf[32];
    if (ms % 86'400'000 == 0 && ms != 0)
        std::snprintf(buf, sizeof(buf), "%lldd", static_cast<long long>(ms / 86'400'000));
    else if (ms % 3'600'000 == 0 && ms != 0)
        std::snprintf(buf, sizeof(buf), "%lldh", static_cast<long long>(ms / 3'600'000));
    else if (ms % 60'000 == 0 && ms != 0)
        std::snprintf(buf, sizeof(buf), "%lldm", static_cast<long long>(ms / 60'000));
    else if (ms % 1000 == 0)
        std::snprintf(buf, sizeof(buf), "%llds", static_cast<long long>(ms / 1000));
    else
        std::snprintf(buf, sizeof(buf), "%lldms", static_cast<long long>(ms));
    return buf;
}

}  // namespace umet
