// Acceptance suite: end-to-end checks with pinned expected values and
// tolerances, one PASS/FAIL line per criterion. Exits nonzero on any FAIL.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fixtures.hpp"
#include "umet/io.hpp"
#include "umet/report.hpp"
#include "umet/snooze.hpp"
#include "umet/sweep.hpp"
#include "umet/timeline.hpp"

using namespace umet;
using namespace umet::testing;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int failures = 0;
std::vector<std::string> details;

void report(int criterion, const char* name, bool pass) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, name);
    if (!pass) ++failures;
}

#define EXPECT(cond)                                                         \
    do {                                                                     \
        if (!(cond)) {                                                       \
            ok = false;                                                      \
            details.push_back(std::string("  failed: ") + #cond + " at line " + \
                              std::to_string(__LINE__));                     \
        }                                                                    \
    } while (0)

bool near(double x, double target, double tol) { return std::abs(x - target) <= tol; }
bool near(const MetricValue& v, double target, double tol) {
    return v.defined() && near(*v, target, tol);
}

// ---- criterion 1: worked-stream golden reproduction (scenario C) ----

bool run_tool(const std::string& args) {
    const char* bin = std::getenv("UMET_BIN");
    if (!bin) return false;
    const int status = std::system((std::string(bin) + " " + args).c_str());
    return WIFEXITED(status) && WEXITSTATUS(status) == 0;
}

bool criterion_worked_stream() {
    bool ok = true;
    const double tol = 0.005;  // printed two-decimal rounding

    // Library path.
    const Dataset d = worked_stream();
    const auto ws = build_event_windows(d.events, kWorkedWindow);
    const auto scored =
        score_stream(label_predictions(d.predictions, ws, 0.5), ScenarioConfig::builtin("C"));
    const ScoreReport rep = build_score_report(scored, ws, ScenarioConfig::builtin("C"));

    EXPECT(near(rep.classic.sensitivity, 0.33, tol));
    EXPECT(near(rep.classic.specificity, 0.50, tol));
    EXPECT(near(rep.classic.ppv, 0.67, tol));
    EXPECT(near(rep.classic.npv, 0.20, tol));
    EXPECT(near(rep.classic.fpr, 0.50, tol));
    EXPECT(near(rep.classic.fnr, 0.67, tol));

    EXPECT(near(rep.utility.u_bpr, 1.00, tol));
    EXPECT(near(rep.utility.u_recall, 0.50, tol));
    EXPECT(near(rep.utility.u_precision, 0.45, tol));
    EXPECT(near(rep.utility.u_recall_pos_preds, 1.00, tol));
    EXPECT(near(rep.utility.u_recall_neg_preds, 0.00, tol));
    EXPECT(near(rep.utility.u_anr, 0.00, tol));
    EXPECT(!rep.utility.u_specificity.defined());
    EXPECT(!rep.utility.u_npv.defined());

    // Alternative columns accrue strictly by row, landing at 1.6/0.0.
    EXPECT(near(rep.matrices.u.aip, 1.6, 1e-12));
    EXPECT(near(rep.matrices.u.ain, 0.0, 1e-12));

    // The self-audit trail carries the booking convention behind those cells.
    EXPECT(audit_csv(scored).find("AiP/BiP from negative predictions") != std::string::npos);

    // Tool path: same numbers through the CLI.
    const fs::path dir = fs::temp_directory_path() / "umet_acceptance_worked";
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_file(dir / "predictions.csv",
               "entity_id,timestamp,class\n"
               "p1,0,neg\np1,600,pos\np1,1200,pos\np1,1800,neg\n"
               "p1,6000,pos\np1,6600,neg\np1,12000,neg\np1,12600,neg\n");
    write_file(dir / "events.csv", "entity_id,timestamp,event_id\np1,2400,ev1\np1,14400,ev2\n");
    EXPECT(run_tool("score --predictions " + (dir / "predictions.csv").string() + " --events " +
                    (dir / "events.csv").string() + " --window 40m --scenario C --out-dir " +
                    dir.string() + " --format json > " + (dir / "stdout.json").string()));
    const json j = json::parse(read_file(dir / "score_report.json"));
    EXPECT(near(j["u_metrics"]["u_precision"].get<double>(), 0.45, tol));
    EXPECT(near(j["u_metrics"]["u_recall"].get<double>(), 0.50, tol));
    EXPECT(j["u_metrics"]["u_npv"].is_null());
    EXPECT(j["u_metrics"]["u_specificity"].is_null());
    EXPECT(near(j["u_matrix"]["aip"].get<double>(), 1.6, 1e-12));
    EXPECT(near(j["u_matrix"]["ain"].get<double>(), 0.0, 1e-12));
    EXPECT(read_file(dir / "score_audit.csv").find("AiP/BiP from negative predictions") !=
           std::string::npos);
    return ok;
}

// ---- criterion 2: snooze-demo golden reproduction ----

bool criterion_snooze_demo() {
    bool ok = true;
    const double tol = 0.005;
    const Dataset d = snooze_demo_stream();
    const auto ws = build_event_windows(d.events, kSnoozeDemoWindow);
    const auto labeled = label_predictions(d.predictions, ws, 0.5);
    const ScenarioConfig scen = ScenarioConfig::builtin("fig10");

    {  // no snooze
        const auto scored = score_stream(labeled, scen);
        const ScoreReport rep = build_score_report(scored, ws, scen);
        EXPECT(near(rep.classic.sensitivity, 0.67, tol));
        EXPECT(near(rep.classic.ppv, 0.50, tol));
        EXPECT(near(rep.utility.u_recall, 1.00, tol));
        EXPECT(near(rep.utility.u_precision, 1.0 / 3.0, tol));
    }
    {  // 40-minute snooze
        const auto snoozed = apply_snooze(labeled, SnoozePolicy::parse("time:40m"));
        const auto scored = score_stream(snoozed, scen);
        const ScoreReport rep = build_score_report(scored, ws, scen);
        EXPECT(near(rep.utility.u_recall, 1.00, tol));
        EXPECT(near(rep.utility.u_precision, 2.0 / 3.0, tol));
        EXPECT(rep.counts.presented_false_positives == 1);

        std::vector<std::int64_t> alerts;
        for (const auto& lp : snoozed)
            if (!lp.suppressed && lp.predicted_class == Class::positive)
                alerts.push_back(lp.record.timestamp.ms / 60'000);
        EXPECT((alerts == std::vector<std::int64_t>{20, 80, 120}));
    }
    return ok;
}

// ---- criterion 3: selection over the published five-row table ----

bool criterion_selection() {
    bool ok = true;
    const PerformanceTable table = PerformanceTable::from_csv(
        "snooze_policy,cutoff,u_recall,adversity_ratio\n"
        "time:5m,0.45,0.72,12.4\n"
        "time:10m,0.45,0.72,4.2\n"
        "time:20m,0.55,0.70,2.3\n"
        "time:60m,0.50,0.58,1.1\n"
        "time:120m,0.40,0.44,1.4\n");
    const SelectionResult r = select_operating_point(
        table, SweepConstraint{SweepConstraint::Kind::min_u_recall, 0.7});
    EXPECT(r.feasible);
    EXPECT(r.selected->snooze.to_string() == "time:20m");
    EXPECT(near(r.selected->cutoff, 0.55, 1e-12));
    EXPECT(near(r.selected->adversity_ratio, 2.3, 1e-12));

    const SelectionResult inf = select_operating_point(
        table, SweepConstraint{SweepConstraint::Kind::min_u_recall, 0.9});
    EXPECT(!inf.feasible);
    EXPECT(!inf.nearest.empty());
    return ok;
}

// ---- criterion 4: burden arithmetic ----

bool criterion_burden() {
    bool ok = true;
    BurdenParams p;
    p.period_alarm_count = 300;
    p.period_length = days(30);
    p.bed_count = 200;
    p.patients_per_caregiver = 8;
    p.shift_length = hours(12);
    EXPECT(near(burden(p), 0.2, 1e-9));
    return ok;
}

// ---- criterion 5: scenario-A equivalence, bitwise over 1000 streams ----

bool criterion_scenario_a() {
    bool ok = true;
    std::mt19937_64 rng(20'240'501);
    const ScenarioConfig a = ScenarioConfig::builtin("A");
    for (int trial = 0; trial < 1000; ++trial) {
        const Dataset d = random_stream(rng);
        const auto ws = build_event_windows(d.events, minutes(25));
        const auto scored = score_stream(label_predictions(d.predictions, ws, 0.45), a);
        const Matrices m = accumulate(scored);
        const CMetrics cm = c_metrics(m.c);
        const UMetrics um = u_metrics(m.u);
        EXPECT(um.u_bpr.value == cm.sensitivity.value);
        EXPECT(um.u_bnr.value == cm.specificity.value);
        EXPECT(um.u_apr.value == cm.fpr.value);
        EXPECT(um.u_anr.value == cm.fnr.value);
        EXPECT(um.u_precision.value == cm.ppv.value);
        EXPECT(um.u_npv.value == cm.npv.value);
        EXPECT(um.u_recall.value == cm.sensitivity.value);
        EXPECT(um.u_specificity.value == cm.specificity.value);
        EXPECT(um.u_adverse_positive_recall.value == cm.fpr.value);
        EXPECT(um.u_adverse_negative_recall.value == cm.fnr.value);
        EXPECT(um.u_recall_pos_preds.value == cm.ppv.value);
        EXPECT(um.u_recall_neg_preds.value == cm.npv.value);
        if (!ok) break;
    }
    return ok;
}

// ---- criterion 6: snooze identity and alert-count monotonicity ----

bool criterion_snooze_properties() {
    bool ok = true;
    std::mt19937_64 rng(616);
    for (int trial = 0; trial < 300; ++trial) {
        const Dataset d = random_stream(rng);  // gaps are at least one minute
        const auto ws = build_event_windows(d.events, minutes(25));
        const auto labeled = label_predictions(d.predictions, ws, 0.5);

        const auto tiny = apply_snooze(labeled, SnoozePolicy::time_window(seconds(59)));
        bool any_suppressed = false;
        for (const auto& lp : tiny) any_suppressed |= lp.suppressed;
        EXPECT(!any_suppressed);
        const Matrices none_m = accumulate(score_stream(labeled, ScenarioConfig::builtin("C")));
        const Matrices tiny_m = accumulate(score_stream(tiny, ScenarioConfig::builtin("C")));
        EXPECT(none_m.u.bp == tiny_m.u.bp);
        EXPECT(none_m.u.ap == tiny_m.u.ap);
        EXPECT(none_m.u.aip == tiny_m.u.aip);
        EXPECT(none_m.c.tp == tiny_m.c.tp);

        std::int64_t last = -1;
        for (const Duration dur :
             {minutes(2), minutes(5), minutes(10), minutes(30), hours(1), hours(4)}) {
            const auto out = apply_snooze(labeled, SnoozePolicy::time_window(dur));
            std::int64_t alerts = 0;
            for (const auto& lp : out)
                if (!lp.suppressed && lp.predicted_class == Class::positive) ++alerts;
            if (last >= 0) EXPECT(alerts <= last);
            last = alerts;
        }
        if (!ok) break;
    }
    return ok;
}

// ---- criterion 7: matrix conservation and shard merging ----

bool criterion_conservation() {
    bool ok = true;
    std::mt19937_64 rng(717);
    ScenarioConfig scen = ScenarioConfig::builtin("C");
    scen.tn_alt = 0.0;  // leaves true negatives irrelevant, exercising that path
    RandomStreamOptions opt;
    opt.max_entities = 6;
    opt.max_predictions_per_entity = 120;
    for (int trial = 0; trial < 100; ++trial) {
        const Dataset d = random_stream(rng, opt);
        const auto ws = build_event_windows(d.events, minutes(25));
        const auto scored = score_stream(label_predictions(d.predictions, ws, 0.55), scen);

        std::int64_t in_cells = 0, irrelevant = 0;
        for (const auto& sp : scored)
            sp.cell == Cell::irrelevant ? ++irrelevant : ++in_cells;
        EXPECT(in_cells + irrelevant == static_cast<std::int64_t>(scored.size()));

        const Matrices serial = accumulate(scored);
        for (const int shards : {3, 7, 16}) {
            const Matrices merged = accumulate_parallel(scored, {}, shards);
            EXPECT(std::abs(merged.u.bp - serial.u.bp) <= 1e-12);
            EXPECT(std::abs(merged.u.ap - serial.u.ap) <= 1e-12);
            EXPECT(std::abs(merged.u.bn - serial.u.bn) <= 1e-12);
            EXPECT(std::abs(merged.u.an - serial.u.an) <= 1e-12);
            EXPECT(std::abs(merged.u.ain - serial.u.ain) <= 1e-12);
            EXPECT(std::abs(merged.u.aip - serial.u.aip) <= 1e-12);
            EXPECT(std::abs(merged.u.bin - serial.u.bin) <= 1e-12);
            EXPECT(std::abs(merged.u.bip - serial.u.bip) <= 1e-12);
            EXPECT(merged.c.tp == serial.c.tp && merged.c.fp == serial.c.fp &&
                   merged.c.tn == serial.c.tn && merged.c.fn == serial.c.fn);
        }
        if (!ok) break;
    }
    return ok;
}

// ---- criterion 8: area under the curve against a rectangle oracle ----

bool criterion_auc() {
    bool ok = true;
    using P = std::pair<double, double>;
    EXPECT(auc_uprc(std::vector<P>{{0, 1}, {1, 1}}).area == 1.0);
    EXPECT(near(auc_uprc(std::vector<P>{{0, 1}, {1, 0}}).area, 0.5, 1e-15));

    std::mt19937_64 rng(818);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 14);
        std::vector<P> pts;
        for (int i = 0; i < n; ++i)
            pts.emplace_back((static_cast<double>(i) + 0.05 + unit(rng) * 0.9) / n, unit(rng));
        const double area = auc_uprc(pts).area;

        std::sort(pts.begin(), pts.end());
        const double lo = pts.front().first, hi = pts.back().first;
        const int steps = 400'000;
        const double h = (hi - lo) / steps;
        double acc = 0.0;
        std::size_t seg = 0;
        for (int i = 0; i < steps; ++i) {
            const double x = lo + (i + 0.5) * h;
            while (seg + 2 < pts.size() && pts[seg + 1].first <= x) ++seg;
            const auto [x0, y0] = pts[seg];
            const auto [x1, y1] = pts[seg + 1];
            acc += (x1 == x0 ? y0 : y0 + (y1 - y0) * (x - x0) / (x1 - x0)) * h;
        }
        EXPECT(std::abs(area - acc) <= 1e-6);
        if (!ok) break;
    }
    return ok;
}

// ---- criterion 9: window serialization properties ----

bool criterion_serialization() {
    bool ok = true;
    std::mt19937_64 rng(919);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<EventRecord> evs;
        const int n = static_cast<int>(rng() % 25);
        const Duration w{1 + static_cast<std::int64_t>(rng() % 4'000'000)};
        for (int i = 0; i < n; ++i)
            evs.push_back(event("e" + std::to_string(rng() % 4),
                                milliseconds(static_cast<std::int64_t>(rng() % 20'000'000))));
        std::sort(evs.begin(), evs.end(), [](const EventRecord& a, const EventRecord& b) {
            if (a.entity_id != b.entity_id) return a.entity_id < b.entity_id;
            return a.timestamp < b.timestamp;
        });
        evs.erase(std::unique(evs.begin(), evs.end(),
                              [](const EventRecord& a, const EventRecord& b) {
                                  return a.entity_id == b.entity_id && a.timestamp == b.timestamp;
                              }),
                  evs.end());

        const auto ws = build_event_windows(evs, w);
        EXPECT(ws.size() == evs.size());
        for (std::size_t i = 0; i < ws.size(); ++i) {
            EXPECT(ws[i].start < ws[i].end);
            EXPECT((ws[i].end - ws[i].start).ms <= w.ms);
            if (i > 0 && ws[i].entity_id == ws[i - 1].entity_id)
                EXPECT(ws[i - 1].end.ms <= ws[i].start.ms);
        }
        for (std::size_t i = 0; i < evs.size(); ++i) {
            const bool ends_at_event =
                std::any_of(ws.begin(), ws.end(), [&](const EventWindow& wd) {
                    return wd.entity_id == evs[i].entity_id && wd.end == evs[i].timestamp;
                });
            EXPECT(ends_at_event);
        }
        if (!ok) break;
    }
    return ok;
}

}  // namespace

int main() {
    report(1, "worked-stream golden reproduction (scenario C)", criterion_worked_stream());
    report(2, "snooze-demo golden reproduction (40m time snooze)", criterion_snooze_demo());
    report(3, "operating-point selection over the five-row table", criterion_selection());
    report(4, "alarm-burden arithmetic at 1e-9", criterion_burden());
    report(5, "scenario-A metrics equal classic metrics bitwise on 1000 streams",
           criterion_scenario_a());
    report(6, "snooze identity below the minimum gap; alert count monotone in duration",
           criterion_snooze_properties());
    report(7, "cell conservation and shard merges within 1e-12", criterion_conservation());
    report(8, "trapezoidal area matches a rectangle oracle within 1e-6", criterion_auc());
    report(9, "serialized windows: disjoint, event-terminated, within nominal length",
           criterion_serialization());

    for (const std::string& d : details) std::puts(d.c_str());
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::puts("all acceptance criteria passed");
    return 0;
}
