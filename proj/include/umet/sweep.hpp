#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "umet/matrix.hpp"
#include "umet/snooze.hpp"
#include "umet/timeline.hpp"

namespace umet {

struct Dataset {
    std::vector<PredictionRecord> predictions;
    std::vector<EventRecord> events;
};

struct SweepConstraint {
    enum class Kind { min_u_recall, max_adversity_ratio };
    Kind kind = Kind::min_u_recall;
    double bound = 0.0;
};

struct SweepConfig {
    std::vector<double> cutoff_grid;  // ascending, in [0,1], non-empty
    std::vector<SnoozePolicy> snooze_grid;
    ScenarioConfig scenario;
    Duration window_length{};
    std::optional<AddressableBounds> addressable;
    std::optional<SweepConstraint> constraint;
    int ap_count_threshold = 9;  // k for pct_k_plus_ap

    void validate() const;  // throws ConfigError
};

struct PerformanceRow {
    SnoozePolicy snooze;
    double cutoff = 0.0;
    MetricValue u_recall, u_precision;
    std::int64_t count_ap = 0;
    double total_ap = 0.0;
    double total_bp = 0.0;
    MetricValue adversity_ratio, pct_zero_ap, pct_k_plus_ap;
};

struct PerformanceTable {
    std::vector<PerformanceRow> rows;

    std::string to_csv() const;
    // Header-driven; columns beyond snooze_policy/cutoff may be absent and
    // parse as undefined. Throws InputError on malformed tables.
    static PerformanceTable from_csv(std::string_view csv);
};

enum class ExecMode { serial, parallel };

// Full pipeline (label -> snooze -> score -> matrices -> metrics) per grid
// point, one row per (snooze, cutoff) in grid order. The parallel mode
// evaluates grid cells concurrently and is row-for-row identical to serial.
PerformanceTable run_sweep(const Dataset& data, const SweepConfig& config,
                           ExecMode mode = ExecMode::parallel);

struct SelectionResult {
    bool feasible = false;
    std::optional<PerformanceRow> selected;
    std::vector<PerformanceRow> nearest;  // closest misses when infeasible
};

// min_u_recall r: among rows with u_recall >= r, minimize adversity ratio.
// max_adversity_ratio a: among rows with adversity <= a, maximize u_recall.
// Ties in either mode break toward higher u-recall, then longer snooze,
// then higher cutoff.
SelectionResult select_operating_point(const PerformanceTable& table,
                                       const SweepConstraint& constraint);

struct CurvePoint {
    double cutoff = 0.0;
    double u_recall = 0.0;
    double u_precision = 0.0;
};

struct CurveResult {
    std::vector<CurvePoint> points;
    std::vector<double> dropped_cutoffs;  // cutoffs with undefined precision
};

// One point per cutoff under a fixed snooze policy; undefined-precision
// points are dropped with a note. Throws InputError when every point is
// undefined.
CurveResult upr_curve(const Dataset& data, const SnoozePolicy& snooze,
                      const ScenarioConfig& scenario,
                      std::span<const double> cutoff_grid,
                      Duration window_length,
                      const std::optional<AddressableBounds>& addressable = std::nullopt);

struct AucResult {
    double area = 0.0;
    bool single_point = false;  // zero-width span, reported with a warning
};

// Trapezoidal area of precision over the achieved recall span, after
// sorting by (recall, precision). No extrapolation toward recall 0 or 1.
// Throws InputError on empty input.
AucResult auc_uprc(std::span<const std::pair<double, double>> recall_precision);

struct BurdenParams {
    double period_alarm_count = 0.0;  // adverse positives per period
    Duration period_length{};
    double bed_count = 0.0;
    double patients_per_caregiver = 0.0;
    Duration shift_length{};
};

// Alerts per caregiver-shift: alarms / (caregivers_per_shift * shifts_in_period).
// Throws ConfigError on nonpositive parameters.
double burden(const BurdenParams& params);

// Number needed to benefit: (1 / u_precision) * nnt. Undefined when
// u_precision is undefined or zero; throws ConfigError when nnt <= 0.
MetricValue nnb(MetricValue u_precision, double nnt);

}  // namespace umet
