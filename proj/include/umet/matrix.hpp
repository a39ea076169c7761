#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "umet/scoring.hpp"

namespace umet {

// Classic count-based confusion matrix.
struct CMatrix {
    std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::int64_t total() const { return tp + fp + tn + fn; }
};

// Utility confusion matrix: summed |utility| per cell plus the four
// alternative-potential columns. Alternative mass accrues strictly by row
// and column sign: beneficial records feed the alternative-adverse column
// of their row (ain for positives, aip for negatives) when the alternative
// is harmful; adverse records feed the alternative-beneficial column (bin
// for positives, bip for negatives) when the alternative is helpful.
struct UMatrix {
    double bp = 0, ap = 0, bn = 0, an = 0;
    double ain = 0, aip = 0, bin = 0, bip = 0;
};

// A metric that may be undefined (zero denominator). Serialized as null in
// machine output and "Undef" in tables.
struct MetricValue {
    std::optional<double> value;
    bool degenerate = false;  // set when scenario validation flagged the metric

    bool defined() const { return value.has_value(); }
    double operator*() const { return *value; }
};

MetricValue ratio(double numerator, double denominator);

struct AccumulateOptions {
    // When set, the classic matrix counts suppressed predictions as
    // negatives (the "as presented" view); by default it counts the raw
    // thresholded classes.
    bool suppressed_as_negative = false;
};

struct Matrices {
    CMatrix c;
    UMatrix u;
    // Alternatives whose sign does not match their column definition carry
    // no cell to land in and are dropped; nonzero means the scenario
    // produces such records and deserves a warning.
    std::int64_t mixed_sign_alt_dropped = 0;
};

// Single-pass accumulation with compensated summation; irrelevant records
// contribute to no cell.
Matrices accumulate(std::span<const ScoredPrediction> scored,
                    AccumulateOptions options = {});

// Shard-parallel accumulation merged cellwise in shard order. Equals the
// serial result to within 1e-12 per cell. shards <= 0 picks the OpenMP
// default.
Matrices accumulate_parallel(std::span<const ScoredPrediction> scored,
                             AccumulateOptions options = {},
                             int shards = 0);

void merge(Matrices& into, const Matrices& part);

struct CMetrics {
    MetricValue sensitivity, specificity, fpr, fnr, ppv, npv, accuracy, f1;
};
CMetrics c_metrics(const CMatrix& m);

struct UMetrics {
    // Realized-utility family.
    MetricValue u_bpr, u_bnr, u_apr, u_anr, u_precision, u_npv;
    // Captured-potential family.
    MetricValue u_recall, u_specificity, u_adverse_positive_recall,
        u_adverse_negative_recall, u_recall_pos_preds, u_recall_neg_preds;
};
UMetrics u_metrics(const UMatrix& m);

struct DescriptiveMetrics {
    std::int64_t count_ap = 0;   // records in the adverse-positive cell
    double total_ap = 0.0;       // summed adverse-positive magnitude
    MetricValue pct_zero_ap;     // fraction of entities with no AP records
    MetricValue pct_k_plus_ap;   // fraction of entities with >= k AP records
    MetricValue adversity_ratio; // AP / BP
    MetricValue u_nns;           // 1 / u-precision
    int k = 9;                   // the threshold pct_k_plus_ap was computed at
};

DescriptiveMetrics descriptive_metrics(std::span<const ScoredPrediction> scored,
                                       const UMatrix& m,
                                       int k = 9);

}  // namespace umet
