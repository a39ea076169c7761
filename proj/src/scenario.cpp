#include "umet/scenario.hpp"

#include <array>
#include <cmath>
#include <map>
#include <set>

#include "umet/errors.hpp"

namespace umet {

namespace {

struct Field {
    const char* name;
    double ScenarioConfig::* member;
};

constexpr std::array<Field, 12> kFields{{
    {"first_tp_utility", &ScenarioConfig::first_tp_utility},
    {"redundant_tp_utility", &ScenarioConfig::redundant_tp_utility},
    {"fp_utility", &ScenarioConfig::fp_utility},
    {"fn_utility", &ScenarioConfig::fn_utility},
    {"tn_utility", &ScenarioConfig::tn_utility},
    {"first_tp_alt", &ScenarioConfig::first_tp_alt},
    {"redundant_tp_alt", &ScenarioConfig::redundant_tp_alt},
    {"first_missed_fn_alt", &ScenarioConfig::first_missed_fn_alt},
    {"redundant_fn_alt_captured", &ScenarioConfig::redundant_fn_alt_captured},
    {"redundant_fn_alt_uncaptured", &ScenarioConfig::redundant_fn_alt_uncaptured},
    {"fp_alt", &ScenarioConfig::fp_alt},
    {"tn_alt", &ScenarioConfig::tn_alt},
}};

}  // namespace

void ScenarioConfig::validate() const {
    for (const Field& f : kFields) {
        const double v = this->*f.member;
        if (!(v >= -1.0 && v <= 1.0))
            throw ConfigError("scenario '" + name + "': " + f.name + " = " + std::to_string(v) +
                              " outside [-1, 1]");
    }
}

ScenarioConfig ScenarioConfig::builtin(std::string_view name) {
    ScenarioConfig s;
    if (name == "A" || name == "a") {
        // Uniform value: every correct prediction +1, every wrong one -1,
        // alternatives mirrored. Utility metrics collapse to count metrics.
        s.name = "A";
        s.first_tp_utility = 1.0;
        s.redundant_tp_utility = 1.0;
        s.fp_utility = -1.0;
        s.fn_utility = -1.0;
        s.tn_utility = 1.0;
        s.first_tp_alt = -1.0;
        s.redundant_tp_alt = -1.0;
        s.first_missed_fn_alt = 1.0;
        s.redundant_fn_alt_captured = 1.0;
        s.redundant_fn_alt_uncaptured = 1.0;
        s.fp_alt = 1.0;
        s.tn_alt = -1.0;
        return s;
    }
    if (name == "B" || name == "b") {
        // First capture is what matters; repeats are mildly useful reminders.
        s.name = "B";
        s.redundant_tp_utility = 0.1;
        s.redundant_fn_alt_captured = 0.1;
        s.redundant_fn_alt_uncaptured = 0.1;
        s.tn_alt = 0.0;
        return s;
    }
    if (name == "C" || name == "c") {
        // Like B, but repeated reminders are a harmful distraction. True
        // negatives keep an adverse-if-positive alternative of -1, matching
        // the alarm cost a spurious positive would have had.
        s.name = "C";
        s.redundant_tp_utility = -0.2;
        s.redundant_fn_alt_captured = -0.2;
        s.redundant_fn_alt_uncaptured = -0.2;
        s.tn_alt = -1.0;
        return s;
    }
    if (name == "fig10") {
        // Repeats are worthless rather than harmful; false alarms cost -1.
        s.name = "fig10";
        s.tn_alt = 0.0;
        return s;
    }
    throw ConfigError("unknown built-in scenario '" + std::string(name) + "'");
}

bool ScenarioConfig::is_builtin(std::string_view name) {
    return name == "A" || name == "a" || name == "B" || name == "b" || name == "C" ||
           name == "c" || name == "fig10";
}

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
    ScenarioConfig s;
    if (j.contains("name")) s.name = j.at("name").get<std::string>();
    for (const Field& f : kFields)
        if (j.contains(f.name)) s.*f.member = j.at(f.name).get<double>();
    if (j.contains("changed_only")) s.changed_only = j.at("changed_only").get<bool>();
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key == "name" || key == "changed_only") continue;
        bool known = false;
        for (const Field& f : kFields) known |= key == f.name;
        if (!known) throw ConfigError("unknown scenario key '" + key + "'");
    }
    s.validate();
    return s;
}

nlohmann::json ScenarioConfig::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    for (const Field& f : kFields) j[f.name] = this->*f.member;
    j["changed_only"] = changed_only;
    return j;
}

namespace {

// Everything validate_scenario needs to know about one producible
// (utility, alternative) pairing.
struct Outcome {
    bool positive_row;
    double utility;
    double alt;
};

const char* kCellNames[] = {"BP", "AP", "BN", "AN", "AiN", "AiP", "BiN", "BiP"};
enum CellIndex { BP, AP, BN, AN, AiN, AiP, BiN, BiP };

struct MetricDeps {
    const char* key;
    const char* display;
    CellIndex a, b;
};

constexpr MetricDeps kMetricDeps[] = {
    {"u_bpr", "u-Beneficial Positive Rate", BP, AN},
    {"u_bnr", "u-Beneficial Negative Rate", BN, AP},
    {"u_apr", "u-Adverse Positive Rate", AP, BN},
    {"u_anr", "u-Adverse Negative Rate", AN, BP},
    {"u_precision", "u-Precision", BP, AP},
    {"u_npv", "u-NPV", BN, AN},
    {"u_recall", "u-Recall", BP, BiP},
    {"u_specificity", "u-Specificity", BN, BiN},
    {"u_adverse_positive_recall", "u-Adverse Positive Recall", AP, AiP},
    {"u_adverse_negative_recall", "u-Adverse Negative Recall", AN, AiN},
    {"u_recall_pos_preds", "u-Recall-for-Positive-Predictions", BP, BiN},
    {"u_recall_neg_preds", "u-Recall-for-Negative-Predictions", BN, BiP},
};

}  // namespace

std::vector<ValidationFinding> validate_scenario(
    const ScenarioConfig& s,
    const std::optional<DatasetSummary>& summary) {
    s.validate();
    std::vector<ValidationFinding> findings;

    const Outcome outcomes[] = {
        {true, s.first_tp_utility, s.first_tp_alt},
        {true, s.redundant_tp_utility, s.redundant_tp_alt},
        {true, s.fp_utility, s.fp_alt},
        {false, s.fn_utility, s.first_missed_fn_alt},
        {false, s.fn_utility, s.redundant_fn_alt_captured},
        {false, s.fn_utility, s.redundant_fn_alt_uncaptured},
        {false, s.tn_utility, s.tn_alt},
    };

    bool reachable[8] = {};
    for (const Outcome& o : outcomes) {
        const bool beneficial = o.utility > 0 || (o.utility == 0 && o.alt < 0);
        const bool adverse = o.utility < 0 || (o.utility == 0 && o.alt > 0);
        if (!beneficial && !adverse) continue;  // irrelevant either way
        if (o.utility != 0) {
            if (o.positive_row)
                reachable[beneficial ? BP : AP] = true;
            else
                reachable[beneficial ? BN : AN] = true;
        }
        if (beneficial && o.alt < 0) reachable[o.positive_row ? AiN : AiP] = true;
        if (adverse && o.alt > 0) reachable[o.positive_row ? BiN : BiP] = true;
    }

    std::vector<std::string> dead_cells;
    for (int i = 0; i < 8; ++i)
        if (!reachable[i]) dead_cells.push_back(kCellNames[i]);

    if (!dead_cells.empty()) {
        ValidationFinding f;
        f.severity = Severity::warning;
        f.cells = dead_cells;
        std::set<std::string> flagged;
        std::string metric_list;
        for (const MetricDeps& m : kMetricDeps) {
            if (reachable[m.a] && reachable[m.b]) continue;
            if (flagged.insert(m.key).second) {
                f.metrics.push_back(m.key);
                if (!metric_list.empty()) metric_list += ", ";
                metric_list += m.display;
            }
        }
        std::string cell_list;
        for (const std::string& c : dead_cells) {
            if (!cell_list.empty()) cell_list += ", ";
            cell_list += c;
        }
        f.message = "scenario '" + s.name + "' can never place nonzero mass in " + cell_list +
                    "; degenerate (only 0, 1, or undefined): " + metric_list;
        findings.push_back(std::move(f));
    }

    if (s.first_tp_utility == 0.0 && s.redundant_tp_utility == 0.0) {
        ValidationFinding f;
        f.severity = Severity::error;
        f.message = "scenario '" + s.name +
                    "': every positive prediction for a captured event scores zero utility, so "
                    "event capture can look perfect while events are missed; give at least one "
                    "positive per event a nonzero value";
        findings.push_back(std::move(f));
    } else if (s.first_tp_utility == 0.0) {
        ValidationFinding f;
        const bool confirmed = summary && summary->has_event_with_single_positive;
        f.severity = confirmed ? Severity::error : Severity::warning;
        f.message = "scenario '" + s.name +
                    "': an event captured by a single positive earns zero utility while "
                    "multi-positive events earn " +
                    std::to_string(s.redundant_tp_utility) +
                    (confirmed ? "; the dataset contains such an event" : "");
        findings.push_back(std::move(f));
    }

    return findings;
}

std::vector<std::string> degenerate_metric_keys(const std::vector<ValidationFinding>& findings) {
    std::vector<std::string> keys;
    std::set<std::string> seen;
    for (const ValidationFinding& f : findings)
        for (const std::string& m : f.metrics)
            if (seen.insert(m).second) keys.push_back(m);
    return keys;
}

}  // namespace umet
