#include <doctest.h>

#include <map>
#include <random>

#include "fixtures.hpp"
#include "umet/errors.hpp"
#include "umet/scoring.hpp"
#include "umet/snooze.hpp"
#include "umet/timeline.hpp"

using namespace umet;
using namespace umet::testing;

namespace {

std::vector<ScoredPrediction> score_worked(const ScenarioConfig& scenario) {
    const Dataset d = worked_stream();
    const auto ws = build_event_windows(d.events, kWorkedWindow);
    return score_stream(label_predictions(d.predictions, ws, 0.5), scenario);
}

}  // namespace

TEST_CASE("worked stream under scenario C: per-row utilities, cells and alternatives") {
    const auto scored = score_worked(ScenarioConfig::builtin("C"));
    REQUIRE(scored.size() == 8);

    const double utility_exp[8] = {0.0, 1.0, -0.2, 0.0, -1.0, 0.0, 0.0, 0.0};
    const double alt_exp[8] = {-0.2, 0.0, 0.0, -0.2, 0.0, -1.0, 1.0, -0.2};
    const Cell cell_exp[8] = {
        Cell::beneficial_negative, Cell::beneficial_positive, Cell::adverse_positive,
        Cell::beneficial_negative, Cell::adverse_positive,    Cell::beneficial_negative,
        Cell::adverse_negative,    Cell::beneficial_negative,
    };
    for (int i = 0; i < 8; ++i) {
        CAPTURE(i);
        CHECK(scored[i].utility == doctest::Approx(utility_exp[i]));
        CHECK(scored[i].alt_utility == doctest::Approx(alt_exp[i]));
        CHECK(scored[i].cell == cell_exp[i]);
    }
}

TEST_CASE("scenario A scores every outcome at full, mirrored value") {
    const auto scored = score_worked(ScenarioConfig::builtin("A"));
    for (const auto& sp : scored) {
        const bool predicted_pos = sp.labeled.predicted_class == Class::positive;
        const bool actual_pos = sp.labeled.actual_class == Class::positive;
        const bool correct = predicted_pos == actual_pos;
        CHECK(sp.utility == (correct ? 1.0 : -1.0));
        CHECK(sp.alt_utility == (correct ? -1.0 : 1.0));
        if (predicted_pos)
            CHECK(sp.cell == (correct ? Cell::beneficial_positive : Cell::adverse_positive));
        else
            CHECK(sp.cell == (correct ? Cell::beneficial_negative : Cell::adverse_negative));
    }
}

TEST_CASE("scenario B rewards redundant captures mildly") {
    const auto scored = score_worked(ScenarioConfig::builtin("B"));
    CHECK(scored[1].utility == doctest::Approx(1.0));   // first capture
    CHECK(scored[2].utility == doctest::Approx(0.1));   // reminder
    CHECK(scored[0].alt_utility == doctest::Approx(0.1));
    CHECK(scored[6].alt_utility == doctest::Approx(1.0));   // first miss of event 2
    CHECK(scored[7].alt_utility == doctest::Approx(0.1));
    CHECK(scored[5].cell == Cell::irrelevant);  // scenario B leaves true negatives unscored
}

TEST_CASE("snooze demo stream, no suppression: one +1 per captured event") {
    const Dataset d = snooze_demo_stream();
    const auto ws = build_event_windows(d.events, kSnoozeDemoWindow);
    const auto scored = score_stream(label_predictions(d.predictions, ws, 0.5),
                                     ScenarioConfig::builtin("fig10"));
    REQUIRE(scored.size() == 13);
    // The first positive inside each window takes the +1; the 110-minute
    // prediction opens the second event's window, so it gets the credit and
    // the 120-minute repeat scores zero.
    const double utility_exp[13] = {0, 0, -1, -1, -1, -1, 0, 0, 1, 0, 0, 1, 0};
    for (int i = 0; i < 13; ++i) {
        CAPTURE(i);
        CHECK(scored[i].utility == doctest::Approx(utility_exp[i]));
    }
}

TEST_CASE("suppressed predictions score as negatives but keep their labels") {
    const Dataset d = snooze_demo_stream();
    const auto ws = build_event_windows(d.events, kSnoozeDemoWindow);
    auto labeled = label_predictions(d.predictions, ws, 0.5);
    labeled = apply_snooze(labeled, SnoozePolicy::parse("time:40m"));
    const auto scored = score_stream(labeled, ScenarioConfig::builtin("fig10"));

    const double utility_exp[13] = {0, 0, -1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1};
    for (int i = 0; i < 13; ++i) {
        CAPTURE(i);
        CHECK(scored[i].utility == doctest::Approx(utility_exp[i]));
    }
    // Labels untouched by suppression.
    CHECK(scored[10].labeled.predicted_class == Class::positive);
    CHECK(scored[10].labeled.suppressed);
    CHECK(scored[10].effective == Class::negative);
}

TEST_CASE("cell placement is total and follows the zero rules") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        ScenarioConfig s;
        s.first_tp_utility = val(rng);
        s.redundant_tp_utility = val(rng);
        s.fp_utility = val(rng);
        s.fn_utility = val(rng);
        s.tn_utility = val(rng);
        s.first_tp_alt = val(rng);
        s.redundant_tp_alt = val(rng);
        s.first_missed_fn_alt = val(rng);
        s.redundant_fn_alt_captured = val(rng);
        s.redundant_fn_alt_uncaptured = val(rng);
        s.fp_alt = val(rng);
        s.tn_alt = val(rng);

        Dataset d = random_stream(rng);
        const auto ws = build_event_windows(d.events, minutes(30));
        const auto scored = score_stream(label_predictions(d.predictions, ws, 0.5), s);
        for (const auto& sp : scored) {
            if (sp.utility == 0.0 && sp.alt_utility == 0.0) {
                CHECK(sp.cell == Cell::irrelevant);
                continue;
            }
            const bool beneficial = sp.cell == Cell::beneficial_positive ||
                                    sp.cell == Cell::beneficial_negative;
            if (sp.utility != 0.0)
                CHECK(beneficial == (sp.utility > 0.0));
            else
                CHECK(beneficial == (sp.alt_utility < 0.0));
            const bool positive_row = sp.cell == Cell::beneficial_positive ||
                                      sp.cell == Cell::adverse_positive;
            CHECK(positive_row == (sp.effective == Class::positive));
        }
    }
}

TEST_CASE("exactly one in-window positive per captured event earns the first-capture value") {
    std::mt19937_64 rng(17);
    ScenarioConfig s = ScenarioConfig::builtin("C");
    for (int trial = 0; trial < 60; ++trial) {
        Dataset d = random_stream(rng);
        const auto ws = build_event_windows(d.events, minutes(30));
        const auto scored = score_stream(label_predictions(d.predictions, ws, 0.3), s);
        std::map<std::string, int> first_count;
        std::map<std::string, int> positives;
        for (const auto& sp : scored) {
            if (!sp.labeled.event_id || sp.effective != Class::positive) continue;
            const std::string key = sp.labeled.record.entity_id + "/" + *sp.labeled.event_id;
            ++positives[key];
            if (sp.utility == s.first_tp_utility) ++first_count[key];
        }
        for (const auto& [key, n] : positives) {
            CAPTURE(key);
            CHECK(first_count[key] == 1);
            (void)n;
        }
    }
}

TEST_CASE("changed-only wrapper zeroes repeats and spares entity-initial predictions") {
    ScenarioConfig s = ScenarioConfig::builtin("C");
    s.changed_only = true;
    const auto scored = score_worked(s);
    // Classes run N P P N P N N N: repeats are rows 3 (P after P), 6, 7, 8.
    CHECK(scored[0].cell != Cell::irrelevant);  // first for the entity
    CHECK(scored[1].cell == Cell::beneficial_positive);
    CHECK(scored[2].cell == Cell::irrelevant);
    CHECK(scored[3].cell == Cell::beneficial_negative);
    CHECK(scored[4].cell == Cell::adverse_positive);
    CHECK(scored[5].cell == Cell::beneficial_negative);
    CHECK(scored[6].cell == Cell::irrelevant);
    CHECK(scored[7].cell == Cell::irrelevant);

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        Dataset d = random_stream(rng);
        const auto ws = build_event_windows(d.events, minutes(30));
        const auto labeled = label_predictions(d.predictions, ws, 0.5);
        const auto base = score_stream(labeled, ScenarioConfig::builtin("C"));
        const auto wrapped = score_stream(labeled, s);
        for (std::size_t i = 0; i < wrapped.size(); ++i) {
            const bool forced = wrapped[i].cell == Cell::irrelevant && base[i].cell != Cell::irrelevant;
            if (!forced) continue;
            REQUIRE(i > 0);
            CHECK(wrapped[i].labeled.record.entity_id == wrapped[i - 1].labeled.record.entity_id);
            CHECK(wrapped[i].effective == wrapped[i - 1].effective);
        }
    }
}

TEST_CASE("positives outside the addressable band are irrelevant and do not capture") {
    AddressableBounds bounds{minutes(5), minutes(20)};
    const auto ws = build_event_windows(std::vector<EventRecord>{event("p", minutes(40))},
                                        minutes(40), bounds);
    std::vector<PredictionRecord> preds{
        pred("p", minutes(2), Class::positive),   // lead 38m: outside
        pred("p", minutes(30), Class::negative),  // lead 10m
        pred("p", minutes(35), Class::negative),  // lead 5m
    };
    const auto scored =
        score_stream(label_predictions(preds, ws, 0.5), ScenarioConfig::builtin("C"));
    CHECK(scored[0].cell == Cell::irrelevant);
    CHECK(scored[0].utility == 0.0);
    // Event stays uncaptured, so the first negative carries the miss.
    CHECK(scored[1].alt_utility == doctest::Approx(1.0));
    CHECK(scored[2].alt_utility == doctest::Approx(-0.2));
}

TEST_CASE("scenario values outside [-1,1] are a config error") {
    ScenarioConfig s;
    s.fp_utility = -1.5;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    CHECK_THROWS_AS(score_worked(s), ConfigError);
    ScenarioConfig ok;
    CHECK_NOTHROW(ok.validate());
}

TEST_CASE("scenario C analysis flags the metrics its zero cells degrade") {
    const auto findings = validate_scenario(ScenarioConfig::builtin("C"));
    REQUIRE(!findings.empty());
    const ValidationFinding* warning = nullptr;
    for (const auto& f : findings)
        if (!f.cells.empty()) warning = &f;
    REQUIRE(warning != nullptr);
    CHECK(warning->severity == Severity::warning);

    auto has = [](const std::vector<std::string>& v, const char* x) {
        for (const auto& s : v)
            if (s == x) return true;
        return false;
    };
    CHECK(has(warning->cells, "BN"));
    CHECK(has(warning->cells, "BiN"));
    CHECK(has(warning->metrics, "u_bnr"));
    CHECK(has(warning->metrics, "u_specificity"));
    CHECK(has(warning->metrics, "u_npv"));
    CHECK(has(warning->metrics, "u_recall_neg_preds"));
    CHECK(has(warning->metrics, "u_apr"));
    // Metrics whose cells both carry mass stay unflagged.
    CHECK(!has(warning->metrics, "u_precision"));
    CHECK(!has(warning->metrics, "u_recall"));
    CHECK(!has(warning->metrics, "u_adverse_positive_recall"));
}

TEST_CASE("scenario A analysis is clean") {
    CHECK(validate_scenario(ScenarioConfig::builtin("A")).empty());
}

TEST_CASE("a scenario that starves captured events of utility is an error") {
    ScenarioConfig s = ScenarioConfig::builtin("C");
    s.first_tp_utility = 0.0;
    s.redundant_tp_utility = 0.0;
    const auto findings = validate_scenario(s);
    bool has_error = false;
    for (const auto& f : findings) has_error |= f.severity == Severity::error;
    CHECK(has_error);

    // Zero first value alone is only a warning, unless the dataset proves
    // a single-positive event exists.
    s.redundant_tp_utility = 0.5;
    bool err = false, warn = false;
    for (const auto& f : validate_scenario(s))
        (f.severity == Severity::error ? err : warn) = true;
    CHECK(warn);
    CHECK(!err);
    DatasetSummary summary;
    summary.has_event_with_single_positive = true;
    err = false;
    for (const auto& f : validate_scenario(s, summary)) err |= f.severity == Severity::error;
    CHECK(err);
}

TEST_CASE("builtin lookup and json round-trip") {
    CHECK(ScenarioConfig::is_builtin("A"));
    CHECK(ScenarioConfig::is_builtin("fig10"));
    CHECK(!ScenarioConfig::is_builtin("Z"));
    CHECK_THROWS_AS(ScenarioConfig::builtin("Z"), ConfigError);

    const ScenarioConfig c = ScenarioConfig::builtin("C");
    const ScenarioConfig back = ScenarioConfig::from_json(c.to_json());
    CHECK(back.redundant_tp_utility == c.redundant_tp_utility);
    CHECK(back.tn_alt == c.tn_alt);
    CHECK(back.name == "C");

    CHECK_THROWS_AS(ScenarioConfig::from_json(nlohmann::json{{"first_tp_utility", 2.0}}), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_json(nlohmann::json{{"mystery_knob", 1.0}}), ConfigError);
}
