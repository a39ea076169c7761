#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "umet/records.hpp"
#include "umet/sweep.hpp"

namespace umet::testing {

inline PredictionRecord pred(std::string entity, Duration at, Class cls) {
    PredictionRecord r;
    r.entity_id = std::move(entity);
    r.timestamp = Instant{at.ms};
    r.label = cls;
    return r;
}

inline PredictionRecord pred(std::string entity, Duration at, double score) {
    PredictionRecord r;
    r.entity_id = std::move(entity);
    r.timestamp = Instant{at.ms};
    r.score = score;
    return r;
}

inline EventRecord event(std::string entity, Duration at, std::string id = "") {
    EventRecord e;
    e.entity_id = std::move(entity);
    e.timestamp = Instant{at.ms};
    e.event_id = std::move(id);
    return e;
}

// Eight pre-thresholded predictions for one entity and two events under a
// 40-minute window. Classic labels in order: FN TP TP FN FP TN FN FN; the
// first event is captured twice, the second missed entirely.
inline Dataset worked_stream() {
    const std::string p = "p1";
    Dataset d;
    d.predictions = {
        pred(p, minutes(0), Class::negative),  pred(p, minutes(10), Class::positive),
        pred(p, minutes(20), Class::positive), pred(p, minutes(30), Class::negative),
        pred(p, minutes(100), Class::positive), pred(p, minutes(110), Class::negative),
        pred(p, minutes(200), Class::negative), pred(p, minutes(210), Class::negative),
    };
    d.events = {event(p, minutes(40), "ev1"), event(p, minutes(240), "ev2")};
    return d;
}

inline constexpr Duration kWorkedWindow = minutes(40);

// Thirteen predictions at a 10-minute cadence: a false-alarm burst at
// 20..50, one event window covering 70..100 and a second covering 110..120.
// Under a 40-minute snooze the only alerts left are at 20, 80 and 120.
inline Dataset snooze_demo_stream() {
    const std::string w = "w1";
    const Class N = Class::negative, P = Class::positive;
    const Class classes[13] = {N, N, P, P, P, P, N, N, P, N, P, P, P};
    Dataset d;
    for (int i = 0; i < 13; ++i) d.predictions.push_back(pred(w, minutes(10 * i), classes[i]));
    d.events = {event(w, minutes(110), "A"), event(w, minutes(130), "B")};
    return d;
}

inline constexpr Duration kSnoozeDemoWindow = minutes(40);

// Random-stream generator for property tests: irregular cadence, scores in
// [0,1], events sprinkled so that all four classic outcomes occur.
struct RandomStreamOptions {
    int max_entities = 4;
    int max_predictions_per_entity = 40;
    double event_prob_per_step = 0.06;  // chance a step closes with an event shortly after
    Duration window = minutes(30);
};

inline Dataset random_stream(std::mt19937_64& rng, const RandomStreamOptions& opt = {}) {
    Dataset d;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int entities = 1 + static_cast<int>(rng() % static_cast<unsigned>(opt.max_entities));
    for (int e = 0; e < entities; ++e) {
        const std::string id = "r" + std::to_string(e);
        const int steps = 2 + static_cast<int>(rng() % static_cast<unsigned>(opt.max_predictions_per_entity));
        std::int64_t t = 0;
        std::int64_t last_event = -1;
        for (int s = 0; s < steps; ++s) {
            t += 60'000 + static_cast<std::int64_t>(rng() % 600'000);  // 1..11 minutes
            d.predictions.push_back(pred(id, milliseconds(t), unit(rng)));
            if (unit(rng) < opt.event_prob_per_step) {
                const std::int64_t ev = t + 1 + static_cast<std::int64_t>(rng() % 300'000);
                if (ev > last_event) {
                    d.events.push_back(event(id, milliseconds(ev)));
                    last_event = ev;
                }
            }
        }
    }
    return d;
}

}  // namespace umet::testing
