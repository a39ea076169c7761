#include "umet/timeline.hpp"

#include <algorithm>
#include <unordered_map>

#include "umet/errors.hpp"

namespace umet {

std::vector<EventWindow> build_event_windows(
    std::span<const EventRecord> events,
    Duration window_length,
    const std::optional<AddressableBounds>& addressable) {
    if (window_length.ms <= 0) throw ConfigError("window length must be positive");
    if (addressable && addressable->min_lead > addressable->max_lead)
        throw ConfigError("addressable min lead exceeds max lead");

    std::vector<EventRecord> sorted(events.begin(), events.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const EventRecord& a, const EventRecord& b) {
        if (a.entity_id != b.entity_id) return a.entity_id < b.entity_id;
        return a.timestamp < b.timestamp;
    });

    std::vector<EventWindow> windows;
    windows.reserve(sorted.size());

    std::unordered_map<std::string, int> auto_ids;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const EventRecord& ev = sorted[i];
        const bool first_of_entity = i == 0 || sorted[i - 1].entity_id != ev.entity_id;
        if (!first_of_entity && sorted[i - 1].timestamp == ev.timestamp)
            throw InputError("duplicate event for entity '" + ev.entity_id + "' at " +
                             format_instant(ev.timestamp));

        EventWindow w;
        w.entity_id = ev.entity_id;
        w.event_id = ev.event_id.empty()
                         ? ev.entity_id + "/ev" + std::to_string(auto_ids[ev.entity_id]++)
                         : ev.event_id;
        w.end = ev.timestamp;
        w.start = ev.timestamp - window_length;
        if (!first_of_entity && sorted[i - 1].timestamp > w.start)
            w.start = sorted[i - 1].timestamp;  // serialization: truncate at the prior event
        w.nominal_length = window_length;
        w.addressable = addressable;
        windows.push_back(std::move(w));
    }

    // Explicit ids must still be unique per entity.
    for (std::size_t i = 1; i < windows.size(); ++i)
        if (windows[i].entity_id == windows[i - 1].entity_id &&
            windows[i].event_id == windows[i - 1].event_id)
            throw InputError("duplicate event id '" + windows[i].event_id + "' for entity '" +
                             windows[i].entity_id + "'");
    return windows;
}

std::vector<LabeledPrediction> label_predictions(
    std::span<const PredictionRecord> predictions,
    std::span<const EventWindow> windows,
    double cutoff) {
    if (cutoff < 0.0 || cutoff > 1.0) throw ConfigError("cutoff must lie in [0,1]");

    std::vector<LabeledPrediction> out;
    out.reserve(predictions.size());
    for (const PredictionRecord& rec : predictions) {
        if (rec.score && (*rec.score < 0.0 || *rec.score > 1.0))
            throw InputError("prediction score outside [0,1] for entity '" + rec.entity_id +
                             "' at " + format_instant(rec.timestamp));
        if (!rec.score && !rec.label)
            throw InputError("prediction without score or class for entity '" + rec.entity_id + "'");
        LabeledPrediction lp;
        lp.record = rec;
        lp.predicted_class = rec.label ? *rec.label
                                       : (*rec.score >= cutoff ? Class::positive : Class::negative);
        out.push_back(std::move(lp));
    }

    std::stable_sort(out.begin(), out.end(), [](const LabeledPrediction& a, const LabeledPrediction& b) {
        if (a.record.entity_id != b.record.entity_id) return a.record.entity_id < b.record.entity_id;
        return a.record.timestamp < b.record.timestamp;
    });

    // Windows per entity, ordered by end; disjointness makes lower_bound by
    // end the single candidate container for a timestamp.
    std::unordered_map<std::string, std::vector<const EventWindow*>> by_entity;
    for (const EventWindow& w : windows) by_entity[w.entity_id].push_back(&w);
    for (auto& [_, ws] : by_entity)
        std::sort(ws.begin(), ws.end(),
                  [](const EventWindow* a, const EventWindow* b) { return a->end < b->end; });

    std::unordered_map<std::string, int> ordinals;  // keyed per (entity, event)
    for (LabeledPrediction& lp : out) {
        auto it = by_entity.find(lp.record.entity_id);
        if (it == by_entity.end()) continue;
        const auto& ws = it->second;
        auto cand = std::upper_bound(ws.begin(), ws.end(), lp.record.timestamp,
                                     [](Instant t, const EventWindow* w) { return t < w->end; });
        if (cand == ws.end()) continue;
        const EventWindow* w = *cand;
        if (lp.record.timestamp < w->start) continue;

        lp.actual_class = Class::positive;
        lp.event_id = w->event_id;
        lp.ordinal_in_window = ordinals[lp.record.entity_id + '\x1f' + w->event_id]++;
        if (w->addressable) {
            const Duration lead = w->end - lp.record.timestamp;
            lp.within_addressable = lead >= w->addressable->min_lead && lead <= w->addressable->max_lead;
        }
    }
    return out;
}

}  // namespace umet
