#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "umet/matrix.hpp"
#include "umet/scenario.hpp"

namespace umet {

struct StreamCounts {
    std::int64_t predictions = 0;
    std::int64_t entities = 0;
    std::int64_t events = 0;                   // windows built
    std::int64_t events_with_predictions = 0;  // windows that own at least one prediction
    std::int64_t captured_events = 0;          // events with an effective positive inside
    std::int64_t alerts = 0;                   // non-suppressed positives
    std::int64_t presented_false_positives = 0;
    std::int64_t suppressed = 0;
};

StreamCounts count_stream(std::span<const ScoredPrediction> scored,
                          std::span<const EventWindow> windows);

struct ScoreReport {
    StreamCounts counts;
    Matrices matrices;          // default classic view
    CMatrix c_presented;        // classic counts with suppressed-as-negative
    CMetrics classic;
    UMetrics utility;
    DescriptiveMetrics descriptive;
    std::vector<ValidationFinding> findings;
};

// Accumulates matrices and metrics and flags metrics the scenario analysis
// marked degenerate.
ScoreReport build_score_report(std::span<const ScoredPrediction> scored,
                               std::span<const EventWindow> windows,
                               const ScenarioConfig& scenario,
                               int ap_count_threshold = 9);

// Machine-readable document keyed by metric name; undefined values are null.
nlohmann::json report_to_json(const ScoreReport& report);

// Aligned plaintext tables: counts, both confusion matrices, and the three
// metric columns side by side. Undefined prints as "Undef".
std::string report_to_table(const ScoreReport& report);

// Per-prediction trail, one row per scored prediction, with the cell and
// alternative-column assignment. Both forms end with the column-accrual
// note that pins down where alternatives are booked.
std::string audit_csv(std::span<const ScoredPrediction> scored);
std::string audit_table(std::span<const ScoredPrediction> scored);

// Stated convention for alternative-potential booking, included in audit
// output so summed AiN/AiP/BiN/BiP cells can be traced row by row.
extern const char* const kAltColumnNote;

}  // namespace umet
