#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "umet/records.hpp"

namespace umet {

enum class SnoozeKind : std::uint8_t {
    none,
    time,               // suppress everything strictly within (alert_t, alert_t + window)
    while_positive,     // suppress positives until a negative passes through
    until_more_certain, // suppress positives whose score does not beat the last alert's
    combination,        // suppressed if any member suppresses; alerts update all members
};

struct SnoozePolicy {
    SnoozeKind kind = SnoozeKind::none;
    Duration window{};                  // time kind only, > 0
    std::vector<SnoozePolicy> members;  // combination kind only, non-empty, not nested

    // Syntax: "none" | "time:40m" | "while-positive" | "until-more-certain",
    // joined with '+' for combinations. Throws ConfigError on bad specs.
    static SnoozePolicy parse(std::string_view spec);
    static SnoozePolicy time_window(Duration d);
    std::string to_string() const;

    bool operator==(const SnoozePolicy&) const = default;
};

// Marks suppressed predictions. State is kept per entity; only emitted
// alerts (non-suppressed positives) start or refresh snooze state, and
// suppressed predictions are invisible to every policy's state machine.
// Input must be sorted by (entity_id, timestamp). Classic labels are left
// untouched; only the suppressed flag is set.
// Throws ConfigError if an until-more-certain policy meets a scoreless
// prediction.
std::vector<LabeledPrediction> apply_snooze(
    std::span<const LabeledPrediction> labeled,
    const SnoozePolicy& policy);

}  // namespace umet
