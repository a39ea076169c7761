#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace umet {

// Rule set assigning each prediction a realized utility and the utility the
// opposite prediction would have had ("alternative"). All values in [-1, 1].
//
// In-window positives split into the first one delivered for an event versus
// redundant repeats; in-window negatives split by whether the event was
// captured at all, with the chronologically first negative of an uncaptured
// event carrying the missed opportunity.
struct ScenarioConfig {
    std::string name = "custom";

    double first_tp_utility = 1.0;
    double redundant_tp_utility = 0.0;
    double fp_utility = -1.0;
    double fn_utility = 0.0;
    double tn_utility = 0.0;

    double first_tp_alt = 0.0;
    double redundant_tp_alt = 0.0;
    double first_missed_fn_alt = 1.0;
    double redundant_fn_alt_captured = 0.0;
    double redundant_fn_alt_uncaptured = 0.0;
    double fp_alt = 0.0;
    double tn_alt = -1.0;

    // Display-delivery wrapper: a prediction whose effective class repeats
    // the previous one for the entity carries no information and is forced
    // to (0, 0).
    bool changed_only = false;

    // Throws ConfigError when any value lies outside [-1, 1].
    void validate() const;

    // Built-ins: "A" (uniform value, collapses to count metrics),
    // "B" (redundant reminders mildly useful), "C" (redundant reminders
    // harmful), "fig10" (redundant repeats worthless, false alarms harmful).
    static ScenarioConfig builtin(std::string_view name);
    static bool is_builtin(std::string_view name);

    static ScenarioConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

enum class Severity { warning, error };

struct ValidationFinding {
    Severity severity = Severity::warning;
    std::string message;
    std::vector<std::string> cells;    // u-matrix cells involved (for cell warnings)
    std::vector<std::string> metrics;  // metric keys flagged degenerate
};

// Optional facts about a concrete dataset that sharpen validation.
struct DatasetSummary {
    bool has_event_with_single_positive = false;
};

// Static analysis of a scenario: warns about u-matrix cells that can never
// carry nonzero mass (metrics over them degenerate to 0/1/undefined) and
// errors when no positive prediction for a captured event can ever earn
// nonzero utility.
std::vector<ValidationFinding> validate_scenario(
    const ScenarioConfig& scenario,
    const std::optional<DatasetSummary>& summary = std::nullopt);

// Metric keys mentioned in warnings, in report order.
std::vector<std::string> degenerate_metric_keys(const std::vector<ValidationFinding>& findings);

}  // namespace umet
