#pragma once

#include <optional>
#include <span>
#include <vector>

#include "umet/records.hpp"

namespace umet {

// Builds one window per event, serialized so that the windows of an entity
// never overlap: a window normally spans [t - window_length, t), but its
// start is truncated at the previous event's timestamp for that entity.
// Two events of one entity at the same instant are rejected as duplicates.
// Output is sorted by (entity_id, end).
std::vector<EventWindow> build_event_windows(
    std::span<const EventRecord> events,
    Duration window_length,
    const std::optional<AddressableBounds>& addressable = std::nullopt);

// Thresholds each prediction (score >= cutoff is positive; pre-thresholded
// labels pass through) and associates it with the window containing its
// timestamp, if any. Output is sorted by (entity_id, timestamp), with
// per-window ordinals assigned in that order.
std::vector<LabeledPrediction> label_predictions(
    std::span<const PredictionRecord> predictions,
    std::span<const EventWindow> windows,
    double cutoff);

}  // namespace umet
