// umet: utility-weighted evaluation of boolean prediction streams, with
// snooze policies, cutoff/snooze sweeps and alarm-burden projection.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "umet/errors.hpp"
#include "umet/io.hpp"
#include "umet/report.hpp"
#include "umet/snooze.hpp"
#include "umet/sweep.hpp"
#include "umet/synth.hpp"
#include "umet/timeline.hpp"
#include "umet/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace umet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;
constexpr int kExitInfeasible = 4;

struct CommonOpts {
    std::string predictions_path;
    std::string events_path;
    std::string window = "1h";
    std::string scenario = "C";
    std::string out_dir = ".";
    std::string format = "table";
};

ScenarioConfig load_scenario(const std::string& spec) {
    if (ScenarioConfig::is_builtin(spec)) return ScenarioConfig::builtin(spec);
    if (!fs::exists(spec))
        throw ConfigError("'" + spec + "' is neither a built-in scenario (A, B, C, fig10) "
                          "nor a scenario file");
    json j;
    try {
        j = json::parse(read_file(spec));
    } catch (const json::exception& e) {
        throw ConfigError("scenario file " + spec + ": " + e.what());
    }
    return ScenarioConfig::from_json(j);
}

std::optional<AddressableBounds> parse_addressable(const std::string& spec) {
    if (spec.empty()) return std::nullopt;
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ConfigError("addressable bounds must look like MIN:MAX, e.g. 5m:2h");
    AddressableBounds b;
    b.min_lead = parse_duration(spec.substr(0, colon));
    b.max_lead = parse_duration(spec.substr(colon + 1));
    if (b.min_lead > b.max_lead) throw ConfigError("addressable min lead exceeds max lead");
    return b;
}

std::vector<double> parse_cutoff_grid(const std::string& spec) {
    std::vector<double> grid;
    auto parse_one = [](const std::string& tok) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end != tok.c_str() + tok.size())
            throw ConfigError("unparseable cutoff '" + tok + "'");
        return v;
    };
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const auto colon2 = spec.find(':', colon + 1);
        if (colon2 == std::string::npos) throw ConfigError("cutoff range must be LO:HI:STEP");
        const double lo = parse_one(spec.substr(0, colon));
        const double hi = parse_one(spec.substr(colon + 1, colon2 - colon - 1));
        const double step = parse_one(spec.substr(colon2 + 1));
        if (step <= 0 || hi < lo) throw ConfigError("bad cutoff range " + spec);
        for (int i = 0;; ++i) {
            // Snap to a 1e-9 decimal grid so 0.05-style steps print cleanly.
            const double v = std::round((lo + step * i) * 1e9) / 1e9;
            if (v > hi + 1e-12) break;
            grid.push_back(std::min(v, hi));
        }
        return grid;
    }
    std::size_t start = 0;
    while (start <= spec.size()) {
        auto comma = spec.find(',', start);
        if (comma == std::string::npos) comma = spec.size();
        grid.push_back(parse_one(spec.substr(start, comma - start)));
        if (comma == spec.size()) break;
        start = comma + 1;
    }
    return grid;
}

std::vector<SnoozePolicy> parse_snooze_grid(const std::string& spec) {
    std::vector<SnoozePolicy> grid;
    std::size_t start = 0;
    while (start <= spec.size()) {
        auto comma = spec.find(',', start);
        if (comma == std::string::npos) comma = spec.size();
        grid.push_back(SnoozePolicy::parse(spec.substr(start, comma - start)));
        if (comma == spec.size()) break;
        start = comma + 1;
    }
    return grid;
}

// Candidate durations bracketing the event window, plus the addressable
// span when one is configured.
std::vector<SnoozePolicy> default_snooze_grid(Duration window,
                                              const std::optional<AddressableBounds>& addr) {
    std::vector<SnoozePolicy> grid{SnoozePolicy{}};
    std::vector<Duration> durations{Duration{window.ms / 4}, Duration{window.ms / 2}, window,
                                    Duration{window.ms * 2}};
    if (addr) {
        const Duration span{addr->max_lead.ms - addr->min_lead.ms};
        if (span.ms > 0) durations.push_back(span);
    }
    for (Duration d : durations) {
        if (d.ms <= 0) continue;
        SnoozePolicy p;
        p.kind = SnoozeKind::time;
        p.window = d;
        if (std::find(grid.begin(), grid.end(), p) == grid.end()) grid.push_back(p);
    }
    return grid;
}

std::string now_epoch_seconds() {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    return std::to_string(std::chrono::duration_cast<std::chrono::seconds>(now).count());
}

struct ManifestWriter {
    std::string command;
    json inputs = json::array();
    json params = json::object();
    json outputs = json::array();

    void add_input(const fs::path& path) {
        inputs.push_back({{"path", path.string()}, {"digest", digest_file(path)}});
    }
    // Deterministic provenance key over the command, parameters and input
    // digests; embedded in the manifest and in every report it covers.
    std::string run_digest() const {
        std::string key = command + "\n" + params.dump() + "\n";
        for (const auto& in : inputs) key += in.at("digest").get<std::string>() + "\n";
        return fnv1a_hex(key);
    }
    void write(const fs::path& out_dir) const {
        const json j{{"tool", "umet"},
                     {"version", kVersion},
                     {"command", command},
                     {"created_at", now_epoch_seconds()},
                     {"run_digest", run_digest()},
                     {"inputs", inputs},
                     {"params", params},
                     {"outputs", outputs}};
        write_file(out_dir / (command + "_manifest.json"), j.dump(2) + "\n");
    }
};

fs::path ensure_out_dir(const std::string& dir) {
    const fs::path p(dir);
    fs::create_directories(p);
    return p;
}

struct LoadedData {
    Dataset data;
    std::vector<EventWindow> windows;
};

LoadedData load_data(const CommonOpts& opt, ManifestWriter& manifest,
                     const std::optional<AddressableBounds>& addr) {
    if (opt.predictions_path.empty()) throw ConfigError("--predictions is required");
    LoadedData ld;
    ld.data.predictions = load_predictions(opt.predictions_path);
    manifest.add_input(opt.predictions_path);
    if (!opt.events_path.empty()) {
        ld.data.events = load_events(opt.events_path);
        manifest.add_input(opt.events_path);
    }
    ld.windows = build_event_windows(ld.data.events, parse_duration(opt.window), addr);
    return ld;
}

int cmd_score(const CommonOpts& opt, double cutoff, const std::string& snooze_spec,
              const std::string& addressable_spec, int k_threshold,
              std::optional<double> nnt) {
    const auto addr = parse_addressable(addressable_spec);
    const ScenarioConfig scenario = load_scenario(opt.scenario);
    const SnoozePolicy snooze = SnoozePolicy::parse(snooze_spec);

    ManifestWriter manifest{.command = "score"};
    const LoadedData ld = load_data(opt, manifest, addr);

    auto labeled = label_predictions(ld.data.predictions, ld.windows, cutoff);
    labeled = apply_snooze(labeled, snooze);
    const auto scored = score_stream(labeled, scenario);
    const ScoreReport report = build_score_report(scored, ld.windows, scenario, k_threshold);

    manifest.params = {{"window", opt.window},
                       {"cutoff", cutoff},
                       {"scenario", scenario.to_json()},
                       {"snooze", snooze.to_string()},
                       {"k_threshold", k_threshold}};
    if (addr)
        manifest.params["addressable"] =
            format_duration(addr->min_lead) + ":" + format_duration(addr->max_lead);
    if (nnt) manifest.params["nnt"] = *nnt;

    json report_json = report_to_json(report);
    std::string table = report_to_table(report);
    if (nnt) {
        const MetricValue v = nnb(report.utility.u_precision, *nnt);
        report_json["descriptive"]["nnb"] = v.defined() ? json(*v) : json(nullptr);
        char line[96];
        std::snprintf(line, sizeof(line), "NNB at NNT %g: %s\n", *nnt,
                      v.defined() ? format_double(*v).c_str() : "Undef");
        table += line;
    }
    report_json["run_digest"] = manifest.run_digest();
    table += "run digest: " + manifest.run_digest() + "\n";
    const std::string audit = audit_csv(scored);

    const fs::path out = ensure_out_dir(opt.out_dir);
    write_file(out / "score_report.json", report_json.dump(2) + "\n");
    write_file(out / "score_report.txt", table);
    write_file(out / "score_audit.csv", audit);
    manifest.outputs = {"score_report.json", "score_report.txt", "score_audit.csv"};
    manifest.write(out);

    if (opt.format == "json")
        std::cout << report_json.dump(2) << "\n";
    else if (opt.format == "csv")
        std::cout << audit;
    else
        std::cout << table << "\n" << audit_table(scored);
    return kExitOk;
}

int cmd_sweep(const CommonOpts& opt, const std::string& cutoffs_spec,
              const std::string& snoozes_spec, const std::string& addressable_spec,
              std::optional<double> min_u_recall, std::optional<double> max_adversity,
              const std::string& select_from, int k_threshold, bool serial) {
    if (min_u_recall && max_adversity)
        throw ConfigError("choose one of --min-u-recall and --max-adversity");
    std::optional<SweepConstraint> constraint;
    if (min_u_recall)
        constraint = SweepConstraint{SweepConstraint::Kind::min_u_recall, *min_u_recall};
    if (max_adversity)
        constraint = SweepConstraint{SweepConstraint::Kind::max_adversity_ratio, *max_adversity};

    ManifestWriter manifest{.command = "sweep"};
    const fs::path out = ensure_out_dir(opt.out_dir);

    PerformanceTable table;
    if (!select_from.empty()) {
        table = PerformanceTable::from_csv(read_file(select_from));
        manifest.add_input(select_from);
        manifest.params["select_from"] = select_from;
    } else {
        const auto addr = parse_addressable(addressable_spec);
        SweepConfig cfg;
        cfg.scenario = load_scenario(opt.scenario);
        cfg.window_length = parse_duration(opt.window);
        cfg.addressable = addr;
        cfg.cutoff_grid = parse_cutoff_grid(cutoffs_spec);
        cfg.snooze_grid = snoozes_spec.empty() ? default_snooze_grid(cfg.window_length, addr)
                                               : parse_snooze_grid(snoozes_spec);
        cfg.constraint = constraint;
        cfg.ap_count_threshold = k_threshold;

        const LoadedData ld = load_data(opt, manifest, addr);
        table = run_sweep(ld.data, cfg, serial ? ExecMode::serial : ExecMode::parallel);
        manifest.params = {{"window", opt.window},
                           {"scenario", cfg.scenario.to_json()},
                           {"cutoffs", cutoffs_spec},
                           {"k_threshold", k_threshold}};
        json snoozes = json::array();
        for (const auto& p : cfg.snooze_grid) snoozes.push_back(p.to_string());
        manifest.params["snooze_grid"] = snoozes;
    }

    const std::string table_csv = table.to_csv();
    write_file(out / "sweep_table.csv", table_csv);
    manifest.outputs.push_back("sweep_table.csv");

    auto metric = [](const MetricValue& v) { return v.defined() ? json(*v) : json(nullptr); };
    auto row_json = [&](const PerformanceRow& r) {
        return json{{"snooze", r.snooze.to_string()},
                    {"cutoff", r.cutoff},
                    {"u_recall", metric(r.u_recall)},
                    {"u_precision", metric(r.u_precision)},
                    {"count_ap", r.count_ap},
                    {"total_ap", r.total_ap},
                    {"total_bp", r.total_bp},
                    {"adversity_ratio", metric(r.adversity_ratio)},
                    {"pct_zero_ap", metric(r.pct_zero_ap)},
                    {"pct_k_plus_ap", metric(r.pct_k_plus_ap)}};
    };

    int exit_code = kExitOk;
    SelectionResult selection;
    json summary{{"rows", table.rows.size()}};
    if (constraint) {
        selection = select_operating_point(table, *constraint);
        summary["constraint"] = {{"kind", constraint->kind == SweepConstraint::Kind::min_u_recall
                                              ? "min_u_recall"
                                              : "max_adversity_ratio"},
                                 {"bound", constraint->bound}};
        if (selection.feasible) {
            summary["selected"] = row_json(*selection.selected);
        } else {
            summary["selected"] = nullptr;
            summary["infeasible"] = true;
            json nearest = json::array();
            for (const auto& r : selection.nearest) nearest.push_back(row_json(r));
            summary["nearest"] = nearest;
            exit_code = kExitInfeasible;
        }

        // One best row per snooze policy: the selection view over the grid.
        json best = json::array();
        PerformanceTable best_rows;
        std::vector<std::string> seen;
        for (const auto& row : table.rows) {
            const std::string key = row.snooze.to_string();
            if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
            seen.push_back(key);
            PerformanceTable sub;
            for (const auto& r : table.rows)
                if (r.snooze.to_string() == key) sub.rows.push_back(r);
            const SelectionResult sr = select_operating_point(sub, *constraint);
            if (sr.feasible) {
                best.push_back(row_json(*sr.selected));
                best_rows.rows.push_back(*sr.selected);
            }
        }
        summary["best_per_snooze"] = best;
        if (!best_rows.rows.empty()) {
            write_file(out / "sweep_best_per_snooze.csv", best_rows.to_csv());
            manifest.outputs.push_back("sweep_best_per_snooze.csv");
        }
    }

    summary["run_digest"] = manifest.run_digest();
    write_file(out / "sweep_summary.json", summary.dump(2) + "\n");
    manifest.outputs.push_back("sweep_summary.json");
    manifest.write(out);

    if (opt.format == "json") {
        std::cout << summary.dump(2) << "\n";
    } else if (opt.format == "csv") {
        std::cout << table_csv;
    } else {
        std::cout << table_csv;
        if (constraint) {
            if (selection.feasible)
                std::cout << "\nselected: " << selection.selected->snooze.to_string() << " cutoff "
                          << format_double(selection.selected->cutoff) << "\n";
            else
                std::cout << "\nno grid point satisfies the constraint\n";
        }
    }
    return exit_code;
}

std::string render_curve_svg(const CurveResult& curve) {
    // Minimal SVG: axes plus the recall/precision polyline.
    const int w = 480, h = 360, margin = 48;
    auto X = [&](double r) { return margin + r * (w - 2 * margin); };
    auto Y = [&](double p) { return h - margin - p * (h - 2 * margin); };
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
                      "\" height=\"" + std::to_string(h) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", margin,
                  h - margin, w - margin, h - margin);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", margin,
                  margin, margin, h - margin);
    svg += buf;
    svg += "<text x=\"" + std::to_string(w / 2) + "\" y=\"" + std::to_string(h - 12) +
           "\" font-size=\"12\">u-recall</text>\n";
    svg += "<text x=\"16\" y=\"" + std::to_string(h / 2) +
           "\" font-size=\"12\" transform=\"rotate(-90 16," + std::to_string(h / 2) +
           ")\">u-precision</text>\n";

    std::vector<CurvePoint> pts = curve.points;
    std::sort(pts.begin(), pts.end(),
              [](const CurvePoint& a, const CurvePoint& b) { return a.u_recall < b.u_recall; });
    std::string poly;
    for (const CurvePoint& p : pts) {
        std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", X(p.u_recall), Y(p.u_precision));
        poly += buf;
    }
    svg += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"2\" points=\"" + poly +
           "\"/>\n";
    for (const CurvePoint& p : pts) {
        std::snprintf(buf, sizeof(buf),
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"#1f6fb2\"/>\n",
                      X(p.u_recall), Y(p.u_precision));
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

int cmd_curve(const CommonOpts& opt, const std::string& cutoffs_spec,
              const std::string& snooze_spec, const std::string& addressable_spec,
              const std::string& plot_path) {
    const auto addr = parse_addressable(addressable_spec);
    const ScenarioConfig scenario = load_scenario(opt.scenario);
    const SnoozePolicy snooze = SnoozePolicy::parse(snooze_spec);
    const std::vector<double> cutoffs = parse_cutoff_grid(cutoffs_spec);

    ManifestWriter manifest{.command = "curve"};
    const LoadedData ld = load_data(opt, manifest, addr);

    const CurveResult curve =
        upr_curve(ld.data, snooze, scenario, cutoffs, parse_duration(opt.window), addr);

    std::vector<std::pair<double, double>> pts;
    for (const CurvePoint& p : curve.points) pts.emplace_back(p.u_recall, p.u_precision);
    const AucResult auc = auc_uprc(pts);

    std::string csv = "cutoff,u_recall,u_precision\n";
    for (const CurvePoint& p : curve.points)
        csv += format_double(p.cutoff) + "," + format_double(p.u_recall) + "," +
               format_double(p.u_precision) + "\n";

    manifest.params = {{"window", opt.window},
                       {"scenario", scenario.to_json()},
                       {"snooze", snooze.to_string()},
                       {"cutoffs", cutoffs_spec}};

    const fs::path out = ensure_out_dir(opt.out_dir);
    write_file(out / "curve_points.csv", csv);
    manifest.outputs.push_back("curve_points.csv");

    const json summary{{"points", curve.points.size()},
                       {"dropped_cutoffs", curve.dropped_cutoffs},
                       {"auc_uprc", auc.area},
                       {"single_point", auc.single_point},
                       {"run_digest", manifest.run_digest()}};
    write_file(out / "curve_summary.json", summary.dump(2) + "\n");
    manifest.outputs.push_back("curve_summary.json");

    if (!plot_path.empty()) {
        write_file(plot_path, render_curve_svg(curve));
        manifest.outputs.push_back(plot_path);
    }
    manifest.write(out);

    if (opt.format == "json")
        std::cout << summary.dump(2) << "\n";
    else
        std::cout << csv;
    if (auc.single_point)
        std::cerr << "warning: a single defined point spans no recall; area is 0\n";
    for (const double c : curve.dropped_cutoffs)
        std::cerr << "note: cutoff " << format_double(c) << " dropped (u-precision undefined)\n";
    return kExitOk;
}

int cmd_burden(const std::string& out_dir, const std::string& format, double alarms,
               const std::string& period, double beds, double ratio, const std::string& shift) {
    BurdenParams p;
    p.period_alarm_count = alarms;
    p.period_length = parse_duration(period);
    p.bed_count = beds;
    p.patients_per_caregiver = ratio;
    p.shift_length = parse_duration(shift);
    const double value = burden(p);

    ManifestWriter manifest{.command = "burden"};
    manifest.params = {{"alarms", alarms}, {"period", period}, {"beds", beds},
                       {"ratio", ratio},   {"shift", shift}};
    const fs::path out = ensure_out_dir(out_dir);
    const json j{{"alerts_per_caregiver_shift", value}, {"run_digest", manifest.run_digest()}};
    write_file(out / "burden.json", j.dump(2) + "\n");
    manifest.outputs.push_back("burden.json");
    manifest.write(out);

    if (format == "json") {
        std::cout << j.dump(2) << "\n";
    } else {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.4f alerts per caregiver-shift\n", value);
        std::cout << buf;
    }
    return kExitOk;
}

int cmd_synth(const std::string& out_dir, const SynthSpec& spec,
              const std::string& out_predictions, const std::string& out_events, bool serial) {
    const SynthOutput data = generate(spec, serial ? ExecMode::serial : ExecMode::parallel);

    const fs::path out = ensure_out_dir(out_dir);
    const fs::path pred_path =
        out_predictions.empty() ? out / "synth_predictions.csv" : fs::path(out_predictions);
    const fs::path ev_path = out_events.empty() ? out / "synth_events.csv" : fs::path(out_events);
    write_file(pred_path, data.predictions_csv);
    write_file(ev_path, data.events_csv);

    ManifestWriter manifest{.command = "synth"};
    manifest.params = {{"seed", spec.seed},
                       {"entities", spec.entities},
                       {"horizon", format_duration(spec.horizon)},
                       {"cadence", format_duration(spec.prediction_cadence)},
                       {"event_rate", spec.event_rate},
                       {"baseline", spec.score_model.baseline},
                       {"noise", spec.score_model.noise},
                       {"lift", spec.score_model.in_window_lift},
                       {"lift_lead", format_duration(spec.score_model.lift_lead)},
                       {"cluster", format_duration(spec.score_model.cluster_persistence)},
                       {"sentinel_prob", spec.score_model.sentinel_probability}};
    manifest.outputs = {pred_path.string(), ev_path.string()};
    manifest.write(out);

    std::cout << "wrote " << pred_path.string() << " and " << ev_path.string() << "\n";
    return kExitOk;
}

int cmd_validate(const CommonOpts& opt) {
    const ScenarioConfig scenario = load_scenario(opt.scenario);

    std::optional<DatasetSummary> summary;
    ManifestWriter manifest{.command = "validate"};
    if (!opt.predictions_path.empty() && !opt.events_path.empty()) {
        const LoadedData ld = load_data(opt, manifest, std::nullopt);
        const auto labeled = label_predictions(ld.data.predictions, ld.windows, 0.5);
        std::map<std::string, int> positives;
        for (const auto& lp : labeled)
            if (lp.event_id && lp.predicted_class == Class::positive)
                ++positives[lp.record.entity_id + "/" + *lp.event_id];
        DatasetSummary s;
        for (const auto& [key, n] : positives) {
            (void)key;
            s.has_event_with_single_positive |= n == 1;
        }
        summary = s;
    }

    const auto findings = validate_scenario(scenario, summary);
    manifest.params = {{"scenario", scenario.to_json()}};
    json j{{"scenario", scenario.to_json()},
           {"findings", json::array()},
           {"degenerate_metrics", degenerate_metric_keys(findings)},
           {"run_digest", manifest.run_digest()}};
    for (const auto& f : findings)
        j["findings"].push_back({{"severity", f.severity == Severity::error ? "error" : "warning"},
                                 {"message", f.message},
                                 {"cells", f.cells},
                                 {"metrics", f.metrics}});

    const fs::path out = ensure_out_dir(opt.out_dir);
    write_file(out / "validate_report.json", j.dump(2) + "\n");
    manifest.outputs = {"validate_report.json"};
    manifest.write(out);

    if (opt.format == "json") {
        std::cout << j.dump(2) << "\n";
    } else if (findings.empty()) {
        std::cout << "scenario '" << scenario.name << "' has no degenerate cells or rule issues\n";
    } else {
        for (const auto& f : findings)
            std::cout << (f.severity == Severity::error ? "error: " : "warning: ") << f.message
                      << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"utility-weighted scoring and alarm-burden tuning for prediction streams"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonOpts opt;
    double cutoff = 0.5;
    std::string snooze_spec = "none";
    std::string addressable_spec;
    int k_threshold = 9;
    std::string cutoffs_spec = "0:1:0.05";
    std::string snoozes_spec;
    std::optional<double> min_u_recall, max_adversity;
    std::string select_from;
    std::string plot_path;
    bool serial = false;

    auto add_common = [&](CLI::App* cmd, bool needs_data) {
        if (needs_data) {
            cmd->add_option("--predictions", opt.predictions_path, "predictions CSV or JSONL");
            cmd->add_option("--events", opt.events_path, "events CSV");
            cmd->add_option("--window", opt.window, "event window length (e.g. 40m)");
        }
        cmd->add_option("--scenario", opt.scenario, "A|B|C|fig10 or a scenario JSON file");
        cmd->add_option("--out-dir", opt.out_dir, "directory for report files");
        cmd->add_option("--format", opt.format, "table|json|csv")
            ->check(CLI::IsMember({"table", "json", "csv"}));
    };

    CLI::App* score = app.add_subcommand("score", "evaluate one cutoff/snooze configuration");
    add_common(score, true);
    score->add_option("--cutoff", cutoff, "positive iff score >= cutoff");
    score->add_option("--snooze", snooze_spec,
                      "none | time:40m | while-positive | until-more-certain");
    score->add_option("--addressable", addressable_spec, "lead bounds MIN:MAX, e.g. 5m:2h");
    score->add_option("--k", k_threshold, "entity alert count for the %k+AP metric");
    std::optional<double> nnt;
    score->add_option("--nnt", nnt, "number needed to treat; adds the NNB projection");

    CLI::App* sweep = app.add_subcommand("sweep", "grid-evaluate cutoffs x snooze policies");
    add_common(sweep, true);
    sweep->add_option("--cutoffs", cutoffs_spec, "LO:HI:STEP or comma list");
    sweep->add_option("--snoozes", snoozes_spec, "comma list of snooze policies");
    sweep->add_option("--addressable", addressable_spec, "lead bounds MIN:MAX");
    sweep->add_option("--min-u-recall", min_u_recall, "select: minimize adversity at this recall");
    sweep->add_option("--max-adversity", max_adversity,
                      "select: maximize recall at this adversity");
    sweep->add_option("--select-from", select_from, "select from an existing table CSV");
    sweep->add_option("--k", k_threshold, "entity alert count for the %k+AP metric");
    sweep->add_flag("--serial", serial, "disable parallel grid evaluation");

    CLI::App* curve = app.add_subcommand("curve", "u-precision versus u-recall across cutoffs");
    add_common(curve, true);
    curve->add_option("--snooze", snooze_spec, "snooze policy for every point");
    curve->add_option("--cutoffs", cutoffs_spec, "LO:HI:STEP or comma list");
    curve->add_option("--addressable", addressable_spec, "lead bounds MIN:MAX");
    curve->add_option("--plot", plot_path, "also render the curve as SVG");

    double alarms = 0, beds = 0, ratio = 0;
    std::string period = "30d", shift = "12h";
    CLI::App* burden_cmd = app.add_subcommand("burden", "project alerts per caregiver-shift");
    burden_cmd->add_option("--alarms", alarms, "adverse alerts per period")->required();
    burden_cmd->add_option("--period", period, "period length (e.g. 30d)");
    burden_cmd->add_option("--beds", beds, "occupied beds")->required();
    burden_cmd->add_option("--ratio", ratio, "patients per caregiver")->required();
    burden_cmd->add_option("--shift", shift, "shift length (e.g. 12h)");
    burden_cmd->add_option("--out-dir", opt.out_dir, "directory for report files");
    burden_cmd->add_option("--format", opt.format, "table|json|csv");

    SynthSpec synth_spec;
    std::string horizon = "24h", cadence = "10m", lift_lead = "1h", cluster = "30m";
    std::string sentinel_lead = "0s", sentinel_duration = "0s";
    std::string out_predictions, out_events;
    CLI::App* synth = app.add_subcommand("synth", "generate a seeded synthetic workload");
    synth->add_option("--seed", synth_spec.seed, "generator seed");
    synth->add_option("--entities", synth_spec.entities, "number of entities");
    synth->add_option("--horizon", horizon, "stream length per entity");
    synth->add_option("--cadence", cadence, "prediction spacing");
    synth->add_option("--event-rate", synth_spec.event_rate, "expected events per entity");
    synth->add_option("--baseline", synth_spec.score_model.baseline, "resting score");
    synth->add_option("--noise", synth_spec.score_model.noise, "noise amplitude");
    synth->add_option("--lift", synth_spec.score_model.in_window_lift, "pre-event score lift");
    synth->add_option("--lift-lead", lift_lead, "how long before events the lift applies");
    synth->add_option("--cluster", cluster, "noise cluster persistence");
    synth->add_option("--sentinel-prob", synth_spec.score_model.sentinel_probability,
                      "chance of an early transient per event");
    synth->add_option("--sentinel-lead", sentinel_lead, "transient start before event");
    synth->add_option("--sentinel-duration", sentinel_duration, "transient length");
    synth->add_option("--out-predictions", out_predictions, "predictions output path");
    synth->add_option("--out-events", out_events, "events output path");
    synth->add_option("--out-dir", opt.out_dir, "directory for default outputs");
    synth->add_flag("--serial", serial, "disable parallel generation");

    CLI::App* validate = app.add_subcommand("validate", "check a scenario for degenerate metrics");
    add_common(validate, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (score->parsed())
            return cmd_score(opt, cutoff, snooze_spec, addressable_spec, k_threshold, nnt);
        if (sweep->parsed())
            return cmd_sweep(opt, cutoffs_spec, snoozes_spec, addressable_spec, min_u_recall,
                             max_adversity, select_from, k_threshold, serial);
        if (curve->parsed())
            return cmd_curve(opt, cutoffs_spec, snooze_spec, addressable_spec, plot_path);
        if (burden_cmd->parsed())
            return cmd_burden(opt.out_dir, opt.format, alarms, period, beds, ratio, shift);
        if (synth->parsed()) {
            SynthSpec spec = synth_spec;
            spec.horizon = parse_duration(horizon);
            spec.prediction_cadence = parse_duration(cadence);
            spec.score_model.lift_lead = parse_duration(lift_lead);
            spec.score_model.cluster_persistence = parse_duration(cluster);
            spec.score_model.sentinel_lead = parse_duration(sentinel_lead);
            spec.score_model.sentinel_duration = parse_duration(sentinel_duration);
            return cmd_synth(opt.out_dir, spec, out_predictions, out_events, serial);
        }
        if (validate->parsed()) return cmd_validate(opt);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
