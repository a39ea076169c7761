#pragma once

#include <cstdint>
#include <string>

#include "umet/sweep.hpp"
#include "umet/time.hpp"

namespace umet {

// Score-generation knobs for the synthetic workload generator.
struct ScoreModel {
    double baseline = 0.15;         // resting score level
    double noise = 0.10;            // peak amplitude of clustered noise
    double in_window_lift = 0.55;   // score boost while an event is approaching
    Duration lift_lead = hours(1);  // how far before an event the lift applies
    Duration cluster_persistence = minutes(30);  // noise holds its level for about this long
    double sentinel_probability = 0.0;  // chance an event also emits an early transient
    Duration sentinel_lead{};           // transient starts this far before the event
    Duration sentinel_duration{};       // and lasts this long (must resolve pre-event)
};

struct SynthSpec {
    std::uint64_t seed = 1;
    int entities = 1;
    Duration horizon{};
    Duration prediction_cadence{};
    double event_rate = 0.0;  // expected events per entity over the horizon
    ScoreModel score_model;

    void validate() const;  // throws ConfigError
};

struct SynthOutput {
    std::string predictions_csv;
    std::string events_csv;
};

// Deterministic for a given spec: entity streams derive their own seeds, so
// serial and parallel generation emit identical bytes.
SynthOutput generate(const SynthSpec& spec, ExecMode mode = ExecMode::parallel);

// The same stream as parsed records (what the CSV round-trips to).
Dataset generate_dataset(const SynthSpec& spec);

}  // namespace umet
