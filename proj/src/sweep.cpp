#include "umet/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "umet/errors.hpp"
#include "umet/io.hpp"

namespace umet {

void SweepConfig::validate() const {
    if (cutoff_grid.empty()) throw ConfigError("cutoff grid is empty");
    if (snooze_grid.empty()) throw ConfigError("snooze grid is empty");
    for (std::size_t i = 0; i < cutoff_grid.size(); ++i) {
        if (cutoff_grid[i] < 0.0 || cutoff_grid[i] > 1.0)
            throw ConfigError("cutoff outside [0,1] in grid");
        if (i > 0 && cutoff_grid[i] <= cutoff_grid[i - 1])
            throw ConfigError("cutoff grid must be strictly ascending");
    }
    if (constraint && constraint->bound < 0.0) throw ConfigError("constraint bound must be >= 0");
    scenario.validate();
    if (window_length.ms <= 0) throw ConfigError("window length must be positive");
}

namespace {

PerformanceRow evaluate_cell(const Dataset& data, const std::vector<EventWindow>& windows,
                             const SweepConfig& config, const SnoozePolicy& snooze,
                             double cutoff) {
    auto labeled = label_predictions(data.predictions, windows, cutoff);
    labeled = apply_snooze(labeled, snooze);
    const auto scored = score_stream(labeled, config.scenario);
    const Matrices m = accumulate(scored);
    const UMetrics um = u_metrics(m.u);
    const DescriptiveMetrics dm = descriptive_metrics(scored, m.u, config.ap_count_threshold);

    PerformanceRow row;
    row.snooze = snooze;
    row.cutoff = cutoff;
    row.u_recall = um.u_recall;
    row.u_precision = um.u_precision;
    row.count_ap = dm.count_ap;
    row.total_ap = m.u.ap;
    row.total_bp = m.u.bp;
    row.adversity_ratio = dm.adversity_ratio;
    row.pct_zero_ap = dm.pct_zero_ap;
    row.pct_k_plus_ap = dm.pct_k_plus_ap;
    return row;
}

}  // namespace

PerformanceTable run_sweep(const Dataset& data, const SweepConfig& config, ExecMode mode) {
    config.validate();
    const auto windows = build_event_windows(data.events, config.window_length, config.addressable);

    const std::size_t n_snooze = config.snooze_grid.size();
    const std::size_t n_cutoff = config.cutoff_grid.size();
    const std::size_t cells = n_snooze * n_cutoff;

    PerformanceTable table;
    table.rows.resize(cells);

    if (mode == ExecMode::serial) {
        for (std::size_t i = 0; i < cells; ++i)
            table.rows[i] = evaluate_cell(data, windows, config, config.snooze_grid[i / n_cutoff],
                                          config.cutoff_grid[i % n_cutoff]);
        return table;
    }

    // Grid cells are independent; rows land at fixed indices so the table
    // is identical to the serial one. Exceptions are re-thrown outside the
    // parallel region.
    std::exception_ptr error;
    std::mutex error_mu;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long long idx = 0; idx < static_cast<long long>(cells); ++idx) {
        try {
            const auto i = static_cast<std::size_t>(idx);
            table.rows[i] = evaluate_cell(data, windows, config, config.snooze_grid[i / n_cutoff],
                                          config.cutoff_grid[i % n_cutoff]);
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mu);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return table;
}

namespace {

std::string metric_csv(const MetricValue& v) { return v.defined() ? format_double(*v) : ""; }

MetricValue metric_from_csv(const std::string& s) {
    MetricValue v;
    if (s.empty() || s == "Undef" || s == "undef" || s == "null") return v;
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw InputError("unparseable metric value '" + s + "'");
    v.value = x;
    return v;
}

}  // namespace

std::string PerformanceTable::to_csv() const {
    std::string out =
        "snooze_policy,cutoff,u_recall,u_precision,count_ap,total_ap,total_bp,"
        "adversity_ratio,pct_zero_ap,pct_k_plus_ap\n";
    for (const PerformanceRow& r : rows) {
        out += csv_escape(r.snooze.to_string());
        out += ',';
        out += format_double(r.cutoff);
        out += ',';
        out += metric_csv(r.u_recall);
        out += ',';
        out += metric_csv(r.u_precision);
        out += ',';
        out += std::to_string(r.count_ap);
        out += ',';
        out += format_double(r.total_ap);
        out += ',';
        out += format_double(r.total_bp);
        out += ',';
        out += metric_csv(r.adversity_ratio);
        out += ',';
        out += metric_csv(r.pct_zero_ap);
        out += ',';
        out += metric_csv(r.pct_k_plus_ap);
        out += '\n';
    }
    return out;
}

PerformanceTable PerformanceTable::from_csv(std::string_view csv) {
    PerformanceTable table;
    std::vector<std::string> header;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t nl = csv.find('\n', start);
        if (nl == std::string_view::npos) nl = csv.size();
        std::string_view line = csv.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const bool last = nl == csv.size();
        start = nl + 1;
        ++line_no;
        if (!line.empty()) {
            const auto fields = split_csv_line(line);
            if (header.empty()) {
                header.assign(fields.begin(), fields.end());
            } else {
                auto col = [&](const char* name) -> const std::string* {
                    for (std::size_t i = 0; i < header.size(); ++i)
                        if (header[i] == name && i < fields.size()) return &fields[i];
                    return nullptr;
                };
                PerformanceRow row;
                const std::string* snooze = col("snooze_policy");
                const std::string* cutoff = col("cutoff");
                if (!snooze || !cutoff)
                    throw InputError("performance table line " + std::to_string(line_no) +
                                     ": snooze_policy and cutoff are required");
                row.snooze = SnoozePolicy::parse(*snooze);
                row.cutoff = std::strtod(cutoff->c_str(), nullptr);
                if (const auto* v = col("u_recall")) row.u_recall = metric_from_csv(*v);
                if (const auto* v = col("u_precision")) row.u_precision = metric_from_csv(*v);
                if (const auto* v = col("count_ap")) row.count_ap = std::strtoll(v->c_str(), nullptr, 10);
                if (const auto* v = col("total_ap")) row.total_ap = std::strtod(v->c_str(), nullptr);
                if (const auto* v = col("total_bp")) row.total_bp = std::strtod(v->c_str(), nullptr);
                if (const auto* v = col("adversity_ratio")) row.adversity_ratio = metric_from_csv(*v);
                if (const auto* v = col("pct_zero_ap")) row.pct_zero_ap = metric_from_csv(*v);
                if (const auto* v = col("pct_k_plus_ap")) row.pct_k_plus_ap = metric_from_csv(*v);
                table.rows.push_back(std::move(row));
            }
        }
        if (last) break;
    }
    if (header.empty()) throw InputError("empty performance table");
    return table;
}

namespace {

// Ordering key for the "longer snooze" tie-break. Non-time policies have no
// duration; they rank above none and below any time window.
std::int64_t snooze_order_key(const SnoozePolicy& p) {
    switch (p.kind) {
        case SnoozeKind::none: return -1;
        case SnoozeKind::time: return p.window.ms;
        case SnoozeKind::combination: {
            std::int64_t key = 0;
            for (const SnoozePolicy& m : p.members) key = std::max(key, snooze_order_key(m));
            return key;
        }
        default: return 0;
    }
}

// true when a is preferred over b on the shared tie-break chain.
bool tie_break_less(const PerformanceRow& a, const PerformanceRow& b) {
    const double ar = a.u_recall.defined() ? *a.u_recall : -1.0;
    const double br = b.u_recall.defined() ? *b.u_recall : -1.0;
    if (ar != br) return ar > br;
    const std::int64_t as = snooze_order_key(a.snooze), bs = snooze_order_key(b.snooze);
    if (as != bs) return as > bs;
    return a.cutoff > b.cutoff;
}

}  // namespace

SelectionResult select_operating_point(const PerformanceTable& table,
                                       const SweepConstraint& constraint) {
    if (table.rows.empty()) throw InputError("cannot select from an empty performance table");
    SelectionResult result;

    const bool min_recall = constraint.kind == SweepConstraint::Kind::min_u_recall;
    std::vector<const PerformanceRow*> eligible;
    for (const PerformanceRow& row : table.rows) {
        if (min_recall) {
            if (row.u_recall.defined() && *row.u_recall >= constraint.bound)
                eligible.push_back(&row);
        } else {
            if (row.adversity_ratio.defined() && *row.adversity_ratio <= constraint.bound &&
                row.u_recall.defined())
                eligible.push_back(&row);
        }
    }

    if (!eligible.empty()) {
        const PerformanceRow* best = eligible.front();
        for (const PerformanceRow* row : eligible) {
            if (min_recall) {
                // Minimize adversity; undefined adversity ranks worst.
                const double ra = row->adversity_ratio.defined()
                                      ? *row->adversity_ratio
                                      : std::numeric_limits<double>::infinity();
                const double ba = best->adversity_ratio.defined()
                                      ? *best->adversity_ratio
                                      : std::numeric_limits<double>::infinity();
                if (ra < ba || (ra == ba && tie_break_less(*row, *best))) best = row;
            } else {
                if (*row->u_recall > *best->u_recall ||
                    (*row->u_recall == *best->u_recall && tie_break_less(*row, *best)))
                    best = row;
            }
        }
        result.feasible = true;
        result.selected = *best;
        return result;
    }

    // Infeasible: report the rows that came closest to the constraint.
    std::vector<PerformanceRow> near(table.rows.begin(), table.rows.end());
    std::stable_sort(near.begin(), near.end(), [&](const PerformanceRow& a, const PerformanceRow& b) {
        if (min_recall) {
            const double ar = a.u_recall.defined() ? *a.u_recall : -1.0;
            const double br = b.u_recall.defined() ? *b.u_recall : -1.0;
            return ar > br;
        }
        const double aa = a.adversity_ratio.defined() ? *a.adversity_ratio
                                                      : std::numeric_limits<double>::infinity();
        const double ba = b.adversity_ratio.defined() ? *b.adversity_ratio
                                                      : std::numeric_limits<double>::infinity();
        return aa < ba;
    });
    if (near.size() > 3) near.resize(3);
    result.nearest = std::move(near);
    return result;
}

CurveResult upr_curve(const Dataset& data, const SnoozePolicy& snooze,
                      const ScenarioConfig& scenario,
                      std::span<const double> cutoff_grid,
                      Duration window_length,
                      const std::optional<AddressableBounds>& addressable) {
    SweepConfig config;
    config.cutoff_grid.assign(cutoff_grid.begin(), cutoff_grid.end());
    config.snooze_grid = {snooze};
    config.scenario = scenario;
    config.window_length = window_length;
    config.addressable = addressable;
    const PerformanceTable table = run_sweep(data, config);

    CurveResult curve;
    for (const PerformanceRow& row : table.rows) {
        if (!row.u_precision.defined() || !row.u_recall.defined()) {
            curve.dropped_cutoffs.push_back(row.cutoff);
            continue;
        }
        curve.points.push_back(CurvePoint{row.cutoff, *row.u_recall, *row.u_precision});
    }
    if (curve.points.empty())
        throw InputError("u-precision is undefined at every cutoff; no curve");
    return curve;
}

AucResult auc_uprc(std::span<const std::pair<double, double>> recall_precision) {
    if (recall_precision.empty()) throw InputError("cannot integrate an empty curve");
    std::vector<std::pair<double, double>> pts(recall_precision.begin(), recall_precision.end());
    std::sort(pts.begin(), pts.end());

    AucResult r;
    if (pts.size() == 1 || pts.front().first == pts.back().first) {
        r.single_point = true;
        return r;  // zero-width recall span
    }
    double area = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        area += (pts[i].first - pts[i - 1].first) * (pts[i].second + pts[i - 1].second) / 2.0;
    r.area = area;
    return r;
}

double burden(const BurdenParams& p) {
    if (p.period_alarm_count < 0) throw ConfigError("alarm count must be >= 0");
    if (p.period_length.ms <= 0 || p.shift_length.ms <= 0)
        throw ConfigError("period and shift lengths must be positive");
    if (p.bed_count <= 0 || p.patients_per_caregiver <= 0)
        throw ConfigError("bed count and patients per caregiver must be positive");
    const double caregivers_per_shift = p.bed_count / p.patients_per_caregiver;
    const double shifts_in_period =
        static_cast<double>(p.period_length.ms) / static_cast<double>(p.shift_length.ms);
    return p.period_alarm_count / (caregivers_per_shift * shifts_in_period);
}

MetricValue nnb(MetricValue u_precision, double nnt) {
    if (nnt <= 0) throw ConfigError("NNT must be positive");
    MetricValue r;
    if (u_precision.defined() && *u_precision > 0.0) r.value = nnt / *u_precision;
    return r;
}

}  // namespace umet
