#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "umet/time.hpp"

namespace umet {

enum class Class : std::uint8_t { negative = 0, positive = 1 };

inline const char* to_string(Class c) { return c == Class::positive ? "pos" : "neg"; }

// One raw classifier emission. Carries either a certainty score in [0,1],
// a pre-thresholded class, or both; at least one must be present.
struct PredictionRecord {
    std::string entity_id;
    Instant timestamp;
    std::optional<double> score;
    std::optional<Class> label;
};

struct EventRecord {
    std::string entity_id;
    Instant timestamp;
    std::string event_id;  // auto-assigned sequentially per entity when empty
};

// Lead-time band, measured backward from the event, within which a positive
// prediction can still be acted on.
struct AddressableBounds {
    Duration min_lead{};
    Duration max_lead{};
};

// Backward-looking interval owning the predictions for one event.
// start is inclusive, end is exclusive and equals the event timestamp.
struct EventWindow {
    std::string event_id;
    std::string entity_id;
    Instant start;
    Instant end;
    Duration nominal_length{};
    std::optional<AddressableBounds> addressable;
};

// A prediction after thresholding and window association.
struct LabeledPrediction {
    PredictionRecord record;
    Class predicted_class = Class::negative;
    Class actual_class = Class::negative;
    std::optional<std::string> event_id;  // present iff actual_class == positive
    int ordinal_in_window = -1;           // 0-based position among the window's predictions
    bool within_addressable = true;       // false when the owning window has bounds and the lead falls outside
    bool suppressed = false;              // set by snooze policies before scoring
};

inline Class effective_class(const LabeledPrediction& p) {
    return p.suppressed ? Class::negative : p.predicted_class;
}

}  // namespace umet
