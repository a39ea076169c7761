#pragma once

#include <span>
#include <vector>

#include "umet/records.hpp"
#include "umet/scenario.hpp"

namespace umet {

// Utility confusion-matrix cell. Positive/negative refers to the effective
// prediction (suppressed predictions act as negatives); beneficial/adverse
// to the sign of the realized utility. Zero-utility predictions are placed
// by the sign of their alternative: a harmful alternative puts them in the
// beneficial column, a helpful alternative in the adverse column, and a
// zero alternative makes them irrelevant.
enum class Cell : std::uint8_t {
    beneficial_positive,
    adverse_positive,
    beneficial_negative,
    adverse_negative,
    irrelevant,
};

const char* to_string(Cell c);

struct ScoredPrediction {
    LabeledPrediction labeled;
    Class effective = Class::negative;
    double utility = 0.0;
    double alt_utility = 0.0;
    Cell cell = Cell::irrelevant;
};

// Cell placement for one scored prediction (the rules above).
Cell classify_cell(Class effective, double utility, double alt_utility);

// Scores a labeled stream under a scenario. Input must be sorted by
// (entity_id, timestamp) with suppression flags already applied; suppressed
// predictions are scored as negatives. Throws ConfigError on invalid
// scenario values.
std::vector<ScoredPrediction> score_stream(
    std::span<const LabeledPrediction> labeled,
    const ScenarioConfig& scenario);

}  // namespace umet
