#include "umet/snooze.hpp"

#include <optional>

#include "umet/errors.hpp"

namespace umet {

SnoozePolicy SnoozePolicy::parse(std::string_view spec) {
    // Combinations first: "time:40m+while-positive".
    if (spec.find('+') != std::string_view::npos) {
        SnoozePolicy combo;
        combo.kind = SnoozeKind::combination;
        std::size_t start = 0;
        while (start <= spec.size()) {
            const std::size_t plus = spec.find('+', start);
            const std::string_view part =
                spec.substr(start, plus == std::string_view::npos ? spec.size() - start : plus - start);
            SnoozePolicy member = parse(part);
            if (member.kind == SnoozeKind::combination)
                throw ConfigError("nested combination snooze: " + std::string(spec));
            if (member.kind != SnoozeKind::none) combo.members.push_back(std::move(member));
            if (plus == std::string_view::npos) break;
            start = plus + 1;
        }
        if (combo.members.empty()) throw ConfigError("empty combination snooze: " + std::string(spec));
        if (combo.members.size() == 1) return combo.members.front();
        return combo;
    }

    SnoozePolicy p;
    if (spec == "none") {
        p.kind = SnoozeKind::none;
    } else if (spec == "while-positive") {
        p.kind = SnoozeKind::while_positive;
    } else if (spec == "until-more-certain") {
        p.kind = SnoozeKind::until_more_certain;
    } else if (spec.rfind("time:", 0) == 0) {
        p.kind = SnoozeKind::time;
        p.window = parse_duration(spec.substr(5));
        if (p.window.ms <= 0) throw ConfigError("time snooze needs a positive duration");
    } else {
        throw ConfigError("unknown snooze policy '" + std::string(spec) + "'");
    }
    return p;
}

SnoozePolicy SnoozePolicy::time_window(Duration d) {
    if (d.ms <= 0) throw ConfigError("time snooze needs a positive duration");
    SnoozePolicy p;
    p.kind = SnoozeKind::time;
    p.window = d;
    return p;
}

std::string SnoozePolicy::to_string() const {
    switch (kind) {
        case SnoozeKind::none: return "none";
        case SnoozeKind::time: return "time:" + format_duration(window);
        case SnoozeKind::while_positive: return "while-positive";
        case SnoozeKind::until_more_certain: return "until-more-certain";
        case SnoozeKind::combination: {
            std::string s;
            for (const SnoozePolicy& m : members) {
                if (!s.empty()) s += '+';
                s += m.to_string();
            }
            return s;
        }
    }
    return "none";
}

namespace {

// Per-entity state for one (non-combination) policy. Suppressed predictions
// never reach update_*: they are invisible to the state machines.
struct PolicyState {
    const SnoozePolicy* policy = nullptr;
    std::optional<Instant> snooze_from;   // time: last alert instant
    bool latched = false;                 // while_positive
    std::optional<double> reference;      // until_more_certain: score to beat

    bool suppresses(const LabeledPrediction& lp) const {
        switch (policy->kind) {
            case SnoozeKind::time:
                // Strictly inside (alert, alert + window); the boundary
                // instant alerts again.
                return snooze_from && lp.record.timestamp > *snooze_from &&
                       lp.record.timestamp < *snooze_from + policy->window;
            case SnoozeKind::while_positive:
                return latched && lp.predicted_class == Class::positive;
            case SnoozeKind::until_more_certain: {
                if (lp.predicted_class != Class::positive) return false;
                if (!reference) return false;
                if (!lp.record.score)
                    throw ConfigError("until-more-certain snooze requires score-bearing predictions");
                return *lp.record.score <= *reference;
            }
            default: return false;
        }
    }

    void on_alert(const LabeledPrediction& lp) {
        switch (policy->kind) {
            case SnoozeKind::time: snooze_from = lp.record.timestamp; break;
            case SnoozeKind::while_positive: latched = true; break;
            case SnoozeKind::until_more_certain:
                if (!lp.record.score)
                    throw ConfigError("until-more-certain snooze requires score-bearing predictions");
                reference = lp.record.score;
                break;
            default: break;
        }
    }

    void on_negative() {
        if (policy->kind == SnoozeKind::while_positive) latched = false;
    }
};

}  // namespace

std::vector<LabeledPrediction> apply_snooze(
    std::span<const LabeledPrediction> labeled,
    const SnoozePolicy& policy) {
    std::vector<LabeledPrediction> out(labeled.begin(), labeled.end());
    if (policy.kind == SnoozeKind::none) return out;

    std::vector<const SnoozePolicy*> parts;
    if (policy.kind == SnoozeKind::combination) {
        if (policy.members.empty()) throw ConfigError("combination snooze has no members");
        for (const SnoozePolicy& m : policy.members) parts.push_back(&m);
    } else {
        parts.push_back(&policy);
    }

    bool needs_scores = false;
    for (const SnoozePolicy* p : parts) needs_scores |= p->kind == SnoozeKind::until_more_certain;
    if (needs_scores)
        for (const LabeledPrediction& lp : out)
            if (!lp.record.score)
                throw ConfigError("until-more-certain snooze requires score-bearing predictions");

    std::vector<PolicyState> states;
    const std::string* entity = nullptr;
    for (LabeledPrediction& lp : out) {
        if (!entity || lp.record.entity_id != *entity) {
            entity = &lp.record.entity_id;
            states.clear();
            for (const SnoozePolicy* p : parts) {
                PolicyState st;
                st.policy = p;
                states.push_back(std::move(st));
            }
        }

        bool suppressed = false;
        for (PolicyState& st : states) suppressed = st.suppresses(lp) || suppressed;
        lp.suppressed = suppressed;
        if (suppressed) continue;

        if (lp.predicted_class == Class::positive) {
            // An emitted alert arms every member.
            for (PolicyState& st : states) st.on_alert(lp);
        } else {
            for (PolicyState& st : states) st.on_negative();
        }
    }
    return out;
}

}  // namespace umet
