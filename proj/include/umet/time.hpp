#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace umet {

// Absolute point in time, milliseconds since the Unix epoch.
struct Instant {
    std::int64_t ms = 0;
    auto operator<=>(const Instant&) const = default;
};

// Signed span of time in milliseconds.
struct Duration {
    std::int64_t ms = 0;
    auto operator<=>(const Duration&) const = default;
};

constexpr Duration milliseconds(std::int64_t n) { return Duration{n}; }
constexpr Duration seconds(std::int64_t n) { return Duration{n * 1000}; }
constexpr Duration minutes(std::int64_t n) { return Duration{n * 60'000}; }
constexpr Duration hours(std::int64_t n) { return Duration{n * 3'600'000}; }
constexpr Duration days(std::int64_t n) { return Duration{n * 86'400'000}; }

constexpr Instant operator+(Instant t, Duration d) { return Instant{t.ms + d.ms}; }
constexpr Instant operator-(Instant t, Duration d) { return Instant{t.ms - d.ms}; }
constexpr Duration operator-(Instant a, Instant b) { return Duration{a.ms - b.ms}; }
constexpr Duration operator+(Duration a, Duration b) { return Duration{a.ms + b.ms}; }
constexpr Duration operator*(Duration d, std::int64_t k) { return Duration{d.ms * k}; }

// Accepts RFC 3339 ("2024-05-01T12:30:00Z", offsets and fractional seconds
// allowed) or a numeric epoch-seconds value ("1714566600", "100.5").
// Throws InputError on anything else.
Instant parse_instant(std::string_view text);

// Epoch seconds, fractional part only when the instant is not on a whole
// second. The inverse of the numeric form accepted by parse_instant.
std::string format_instant(Instant t);

// Accepts "<n><unit>" with unit one of ms/s/m/h/d, or a bare number meaning
// seconds. Throws ConfigError on anything else or on non-integer counts.
Duration parse_duration(std::string_view text);

// Shortest exact representation: largest unit that divides evenly.
std::string format_duration(Duration d);

}  // namespace umet
