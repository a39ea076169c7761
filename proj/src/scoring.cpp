#include "umet/scoring.hpp"

#include <unordered_map>

#include "umet/errors.hpp"

namespace umet {

const char* to_string(Cell c) {
    switch (c) {
        case Cell::beneficial_positive: return "BP";
        case Cell::adverse_positive: return "AP";
        case Cell::beneficial_negative: return "BN";
        case Cell::adverse_negative: return "AN";
        case Cell::irrelevant: return "irrelevant";
    }
    return "?";
}

Cell classify_cell(Class effective, double utility, double alt_utility) {
    const bool positive = effective == Class::positive;
    if (utility > 0) return positive ? Cell::beneficial_positive : Cell::beneficial_negative;
    if (utility < 0) return positive ? Cell::adverse_positive : Cell::adverse_negative;
    // Zero utility: a harmful alternative means this was the right call
    // (beneficial column); a helpful alternative means opportunity missed
    // (adverse column); zero both ways is irrelevant.
    if (alt_utility < 0) return positive ? Cell::beneficial_positive : Cell::beneficial_negative;
    if (alt_utility > 0) return positive ? Cell::adverse_positive : Cell::adverse_negative;
    return Cell::irrelevant;
}

namespace {

struct EventState {
    bool captured = false;            // any addressable effective positive
    const LabeledPrediction* first_positive = nullptr;
    const LabeledPrediction* first_negative = nullptr;  // first effective negative
};

}  // namespace

std::vector<ScoredPrediction> score_stream(
    std::span<const LabeledPrediction> labeled,
    const ScenarioConfig& scenario) {
    scenario.validate();

    // Pass 1: per-event capture state. Positives outside the addressable
    // band cannot capture an event (they are scored irrelevant below).
    std::unordered_map<std::string, EventState> events;
    for (const LabeledPrediction& lp : labeled) {
        if (!lp.event_id) continue;
        EventState& st = events[lp.record.entity_id + '\x1f' + *lp.event_id];
        if (effective_class(lp) == Class::positive) {
            if (!lp.within_addressable) continue;
            if (!st.captured) {
                st.captured = true;
                st.first_positive = &lp;
            }
        } else if (!st.first_negative) {
            st.first_negative = &lp;
        }
    }

    std::vector<ScoredPrediction> out;
    out.reserve(labeled.size());
    for (const LabeledPrediction& lp : labeled) {
        ScoredPrediction sp;
        sp.labeled = lp;
        sp.effective = effective_class(lp);

        double u = 0.0, alt = 0.0;
        if (lp.event_id) {
            const EventState& st = events[lp.record.entity_id + '\x1f' + *lp.event_id];
            if (sp.effective == Class::positive) {
                if (!lp.within_addressable) {
                    u = 0.0;  // too early or too late to act on; carries no value either way
                    alt = 0.0;
                } else if (st.first_positive == &lp) {
                    u = scenario.first_tp_utility;
                    alt = scenario.first_tp_alt;
                } else {
                    u = scenario.redundant_tp_utility;
                    alt = scenario.redundant_tp_alt;
                }
            } else {
                u = scenario.fn_utility;
                if (st.captured)
                    alt = scenario.redundant_fn_alt_captured;
                else
                    alt = st.first_negative == &lp ? scenario.first_missed_fn_alt
                                                   : scenario.redundant_fn_alt_uncaptured;
            }
        } else {
            if (sp.effective == Class::positive) {
                u = scenario.fp_utility;
                alt = scenario.fp_alt;
            } else {
                u = scenario.tn_utility;
                alt = scenario.tn_alt;
            }
        }
        sp.utility = u;
        sp.alt_utility = alt;
        sp.cell = classify_cell(sp.effective, u, alt);
        out.push_back(std::move(sp));
    }

    if (scenario.changed_only) {
        // A prediction repeating the previous effective class for its entity
        // delivers no new information.
        for (std::size_t i = 1; i < out.size(); ++i) {
            const auto& prev = out[i - 1];
            const auto& cur = out[i];
            if (prev.labeled.record.entity_id != cur.labeled.record.entity_id) continue;
            if (prev.effective != cur.effective) continue;
            out[i].utility = 0.0;
            out[i].alt_utility = 0.0;
            out[i].cell = Cell::irrelevant;
        }
    }
    return out;
}

}  // namespace umet
