#include "umet/report.hpp"

#include <cstdio>
#include <set>
#include <unordered_set>

#include "umet/io.hpp"

namespace umet {

const char* const kAltColumnNote =
    "note: alternative-potential mass accrues strictly by prediction row -- "
    "AiN/BiN from positive predictions, AiP/BiP from negative predictions; "
    "zero-utility predictions sit in the column opposite their alternative's sign.";

StreamCounts count_stream(std::span<const ScoredPrediction> scored,
                          std::span<const EventWindow> windows) {
    StreamCounts c;
    c.predictions = static_cast<std::int64_t>(scored.size());
    c.events = static_cast<std::int64_t>(windows.size());

    std::unordered_set<std::string> entities;
    std::unordered_set<std::string> seen_events;
    std::unordered_set<std::string> captured;
    for (const ScoredPrediction& sp : scored) {
        const auto& lp = sp.labeled;
        entities.insert(lp.record.entity_id);
        if (lp.suppressed) ++c.suppressed;
        if (!lp.suppressed && lp.predicted_class == Class::positive) {
            ++c.alerts;
            if (lp.actual_class == Class::negative) ++c.presented_false_positives;
        }
        if (lp.event_id) {
            const std::string key = lp.record.entity_id + '\x1f' + *lp.event_id;
            seen_events.insert(key);
            if (sp.effective == Class::positive && lp.within_addressable) captured.insert(key);
        }
    }
    c.entities = static_cast<std::int64_t>(entities.size());
    c.events_with_predictions = static_cast<std::int64_t>(seen_events.size());
    c.captured_events = static_cast<std::int64_t>(captured.size());
    return c;
}

ScoreReport build_score_report(std::span<const ScoredPrediction> scored,
                               std::span<const EventWindow> windows,
                               const ScenarioConfig& scenario,
                               int ap_count_threshold) {
    ScoreReport r;
    r.counts = count_stream(scored, windows);
    r.matrices = accumulate(scored);
    r.c_presented = accumulate(scored, AccumulateOptions{.suppressed_as_negative = true}).c;
    r.classic = c_metrics(r.matrices.c);
    r.utility = u_metrics(r.matrices.u);
    r.descriptive = descriptive_metrics(scored, r.matrices.u, ap_count_threshold);
    r.findings = validate_scenario(scenario);

    const auto degenerate = degenerate_metric_keys(r.findings);
    auto flag = [&](MetricValue& v, const char* key) {
        for (const std::string& k : degenerate)
            if (k == key) v.degenerate = true;
    };
    flag(r.utility.u_bpr, "u_bpr");
    flag(r.utility.u_bnr, "u_bnr");
    flag(r.utility.u_apr, "u_apr");
    flag(r.utility.u_anr, "u_anr");
    flag(r.utility.u_precision, "u_precision");
    flag(r.utility.u_npv, "u_npv");
    flag(r.utility.u_recall, "u_recall");
    flag(r.utility.u_specificity, "u_specificity");
    flag(r.utility.u_adverse_positive_recall, "u_adverse_positive_recall");
    flag(r.utility.u_adverse_negative_recall, "u_adverse_negative_recall");
    flag(r.utility.u_recall_pos_preds, "u_recall_pos_preds");
    flag(r.utility.u_recall_neg_preds, "u_recall_neg_preds");
    return r;
}

namespace {

nlohmann::json metric_json(const MetricValue& v) {
    if (!v.defined()) return nullptr;
    return *v;
}

std::string fmt2(const MetricValue& v) {
    if (!v.defined()) return "Undef";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", *v);
    return buf;
}

std::string fmt2(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

std::string pad(std::string s, std::size_t width, bool left = false) {
    while (s.size() < width) {
        if (left)
            s.insert(s.begin(), ' ');
        else
            s.push_back(' ');
    }
    return s;
}

}  // namespace

nlohmann::json report_to_json(const ScoreReport& r) {
    nlohmann::json j;
    j["counts"] = {
        {"predictions", r.counts.predictions},
        {"entities", r.counts.entities},
        {"events", r.counts.events},
        {"events_with_predictions", r.counts.events_with_predictions},
        {"captured_events", r.counts.captured_events},
        {"alerts", r.counts.alerts},
        {"presented_false_positives", r.counts.presented_false_positives},
        {"suppressed", r.counts.suppressed},
    };
    j["c_matrix"] = {{"tp", r.matrices.c.tp}, {"fp", r.matrices.c.fp},
                     {"tn", r.matrices.c.tn}, {"fn", r.matrices.c.fn}};
    j["c_matrix_presented"] = {{"tp", r.c_presented.tp}, {"fp", r.c_presented.fp},
                               {"tn", r.c_presented.tn}, {"fn", r.c_presented.fn}};
    j["u_matrix"] = {{"bp", r.matrices.u.bp}, {"ap", r.matrices.u.ap}, {"bn", r.matrices.u.bn},
                     {"an", r.matrices.u.an}, {"ain", r.matrices.u.ain}, {"aip", r.matrices.u.aip},
                     {"bin", r.matrices.u.bin}, {"bip", r.matrices.u.bip}};
    j["c_metrics"] = {
        {"sensitivity", metric_json(r.classic.sensitivity)},
        {"specificity", metric_json(r.classic.specificity)},
        {"fpr", metric_json(r.classic.fpr)},
        {"fnr", metric_json(r.classic.fnr)},
        {"ppv", metric_json(r.classic.ppv)},
        {"npv", metric_json(r.classic.npv)},
        {"accuracy", metric_json(r.classic.accuracy)},
        {"f1", metric_json(r.classic.f1)},
    };
    j["u_metrics"] = {
        {"u_bpr", metric_json(r.utility.u_bpr)},
        {"u_bnr", metric_json(r.utility.u_bnr)},
        {"u_apr", metric_json(r.utility.u_apr)},
        {"u_anr", metric_json(r.utility.u_anr)},
        {"u_precision", metric_json(r.utility.u_precision)},
        {"u_npv", metric_json(r.utility.u_npv)},
        {"u_recall", metric_json(r.utility.u_recall)},
        {"u_specificity", metric_json(r.utility.u_specificity)},
        {"u_adverse_positive_recall", metric_json(r.utility.u_adverse_positive_recall)},
        {"u_adverse_negative_recall", metric_json(r.utility.u_adverse_negative_recall)},
        {"u_recall_pos_preds", metric_json(r.utility.u_recall_pos_preds)},
        {"u_recall_neg_preds", metric_json(r.utility.u_recall_neg_preds)},
    };
    j["descriptive"] = {
        {"count_ap", r.descriptive.count_ap},
        {"total_ap", r.descriptive.total_ap},
        {"pct_zero_ap", metric_json(r.descriptive.pct_zero_ap)},
        {"pct_k_plus_ap", metric_json(r.descriptive.pct_k_plus_ap)},
        {"k_threshold", r.descriptive.k},
        {"adversity_ratio", metric_json(r.descriptive.adversity_ratio)},
        {"u_nns", metric_json(r.descriptive.u_nns)},
    };
    j["degenerate_metrics"] = degenerate_metric_keys(r.findings);
    nlohmann::json findings = nlohmann::json::array();
    for (const ValidationFinding& f : r.findings)
        findings.push_back({{"severity", f.severity == Severity::error ? "error" : "warning"},
                            {"message", f.message}});
    j["scenario_findings"] = findings;
    j["mixed_sign_alt_dropped"] = r.matrices.mixed_sign_alt_dropped;
    return j;
}

std::string report_to_table(const ScoreReport& r) {
    std::string out;
    out += "predictions " + std::to_string(r.counts.predictions) +
           " | entities " + std::to_string(r.counts.entities) +
           " | events " + std::to_string(r.counts.events) +
           " | captured " + std::to_string(r.counts.captured_events) +
           " | alerts " + std::to_string(r.counts.alerts) +
           " | presented FP " + std::to_string(r.counts.presented_false_positives) +
           " | suppressed " + std::to_string(r.counts.suppressed) + "\n\n";

    const auto& c = r.matrices.c;
    const auto& u = r.matrices.u;
    out += "Classic counts                  Utility matrix\n";
    out += "            actual+  actual-                alt-adv      beneficial   adverse      alt-ben\n";
    out += "  predict+ " + pad(std::to_string(c.tp), 8, true) + " " + pad(std::to_string(c.fp), 8, true) +
           "      predict+  " + pad(fmt2(u.ain) + " (AiN)", 12) + " " + pad(fmt2(u.bp) + " (BP)", 12) +
           " " + pad(fmt2(u.ap) + " (AP)", 12) + " " + pad(fmt2(u.bin) + " (BiN)", 12) + "\n";
    out += "  predict- " + pad(std::to_string(c.fn), 8, true) + " " + pad(std::to_string(c.tn), 8, true) +
           "      predict-  " + pad(fmt2(u.aip) + " (AiP)", 12) + " " + pad(fmt2(u.bn) + " (BN)", 12) +
           " " + pad(fmt2(u.an) + " (AN)", 12) + " " + pad(fmt2(u.bip) + " (BiP)", 12) + "\n\n";

    struct Line {
        const char* classic_name;
        MetricValue classic;
        const char* realized_name;
        MetricValue realized;
        const char* potential_name;
        MetricValue potential;
    };
    const Line lines[] = {
        {"Sensitivity (Recall)", r.classic.sensitivity, "u-BPR", r.utility.u_bpr, "u-Recall", r.utility.u_recall},
        {"Specificity", r.classic.specificity, "u-BNR", r.utility.u_bnr, "u-Specificity", r.utility.u_specificity},
        {"Precision (PPV)", r.classic.ppv, "u-Precision", r.utility.u_precision, "u-Recall pos preds", r.utility.u_recall_pos_preds},
        {"NPV", r.classic.npv, "u-NPV", r.utility.u_npv, "u-Recall neg preds", r.utility.u_recall_neg_preds},
        {"FPR", r.classic.fpr, "u-APR", r.utility.u_apr, "u-Adverse pos recall", r.utility.u_adverse_positive_recall},
        {"FNR", r.classic.fnr, "u-ANR", r.utility.u_anr, "u-Adverse neg recall", r.utility.u_adverse_negative_recall},
    };
    out += pad("Metric", 22) + pad("Classic", 9, true) + "    " + pad("Realized", 30) +
           pad("Captured potential", 30) + "\n";
    for (const Line& l : lines) {
        std::string realized = std::string(l.realized_name) + " " + fmt2(l.realized) +
                               (l.realized.degenerate ? " *" : "");
        std::string potential = std::string(l.potential_name) + " " + fmt2(l.potential) +
                                (l.potential.degenerate ? " *" : "");
        out += pad(l.classic_name, 22) + pad(fmt2(l.classic), 9, true) + "    " + pad(realized, 30) +
               pad(potential, 30) + "\n";
    }
    out += pad("Accuracy", 22) + pad(fmt2(r.classic.accuracy), 9, true) + "\n";
    out += pad("F1", 22) + pad(fmt2(r.classic.f1), 9, true) + "\n\n";

    out += "#AP " + std::to_string(r.descriptive.count_ap) +
           " | AP " + fmt2(r.descriptive.total_ap) +
           " | BP " + fmt2(u.bp) +
           " | adversity ratio " + fmt2(r.descriptive.adversity_ratio) +
           " | %0AP " + (r.descriptive.pct_zero_ap.defined() ? fmt2(*r.descriptive.pct_zero_ap * 100.0) + "%" : "Undef") +
           " | %" + std::to_string(r.descriptive.k) + "+AP " +
           (r.descriptive.pct_k_plus_ap.defined() ? fmt2(*r.descriptive.pct_k_plus_ap * 100.0) + "%" : "Undef") +
           " | u-NNS " + fmt2(r.descriptive.u_nns) + "\n";

    bool any_star = false;
    for (const Line& l : lines) any_star |= l.realized.degenerate || l.potential.degenerate;
    if (any_star) out += "* scenario analysis: metric can only be 0, 1, or undefined here\n";
    for (const ValidationFinding& f : r.findings)
        out += std::string(f.severity == Severity::error ? "error: " : "warning: ") + f.message + "\n";
    if (r.matrices.mixed_sign_alt_dropped > 0)
        out += "warning: " + std::to_string(r.matrices.mixed_sign_alt_dropped) +
               " alternative value(s) dropped: sign matched the realized column\n";
    return out;
}

namespace {

// Which alternative column a record's alternative feeds, if any.
std::string alt_column(const ScoredPrediction& sp) {
    const bool positive_row = sp.effective == Class::positive;
    const bool beneficial =
        sp.cell == Cell::beneficial_positive || sp.cell == Cell::beneficial_negative;
    const bool adverse = sp.cell == Cell::adverse_positive || sp.cell == Cell::adverse_negative;
    if (beneficial && sp.alt_utility < 0) return positive_row ? "AiN" : "AiP";
    if (adverse && sp.alt_utility > 0) return positive_row ? "BiN" : "BiP";
    return "";
}

std::string classic_label(const LabeledPrediction& lp) {
    const bool pos = lp.predicted_class == Class::positive;
    const bool actual = lp.actual_class == Class::positive;
    if (pos) return actual ? "TP" : "FP";
    return actual ? "FN" : "TN";
}

}  // namespace

std::string audit_csv(std::span<const ScoredPrediction> scored) {
    std::string out =
        "index,entity_id,timestamp,score,predicted,actual,event_id,classic,suppressed,"
        "effective,utility,cell,alt_utility,alt_column\n";
    std::size_t i = 0;
    for (const ScoredPrediction& sp : scored) {
        const auto& lp = sp.labeled;
        out += std::to_string(++i);
        out += ',';
        out += csv_escape(lp.record.entity_id);
        out += ',';
        out += format_instant(lp.record.timestamp);
        out += ',';
        out += lp.record.score ? format_double(*lp.record.score) : "";
        out += ',';
        out += to_string(lp.predicted_class);
        out += ',';
        out += to_string(lp.actual_class);
        out += ',';
        out += lp.event_id ? csv_escape(*lp.event_id) : "";
        out += ',';
        out += classic_label(lp);
        out += ',';
        out += lp.suppressed ? "1" : "0";
        out += ',';
        out += to_string(sp.effective);
        out += ',';
        out += format_double(sp.utility);
        out += ',';
        out += to_string(sp.cell);
        out += ',';
        out += format_double(sp.alt_utility);
        out += ',';
        out += alt_column(sp);
        out += '\n';
    }
    out += "# ";
    out += kAltColumnNote;
    out += '\n';
    return out;
}

std::string audit_table(std::span<const ScoredPrediction> scored) {
    std::string out = pad("#", 5, true) + "  " + pad("entity", 10) + pad("time", 12) +
                      pad("pred", 6) + pad("actual", 8) + pad("event", 12) + pad("classic", 9) +
                      pad("snoozed", 9) + pad("utility", 9, true) + "  " + pad("cell", 12) +
                      pad("alt", 7, true) + "  alt-col\n";
    std::size_t i = 0;
    for (const ScoredPrediction& sp : scored) {
        const auto& lp = sp.labeled;
        out += pad(std::to_string(++i), 5, true) + "  " + pad(lp.record.entity_id, 10) +
               pad(format_instant(lp.record.timestamp), 12) + pad(to_string(lp.predicted_class), 6) +
               pad(to_string(lp.actual_class), 8) + pad(lp.event_id ? *lp.event_id : "-", 12) +
               pad(classic_label(lp), 9) + pad(lp.suppressed ? "yes" : "no", 9) +
               pad(fmt2(sp.utility), 9, true) + "  " + pad(to_string(sp.cell), 12) +
               pad(fmt2(sp.alt_utility), 7, true) + "  " + alt_column(sp) + "\n";
    }
    out += kAltColumnNote;
    out += '\n';
    return out;
}

}  // namespace umet
