#include "umet/matrix.hpp"

#include <cmath>
#include <unordered_map>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace umet {

MetricValue ratio(double numerator, double denominator) {
    MetricValue v;
    if (denominator != 0.0) v.value = numerator / denominator;
    return v;
}

namespace {

// Neumaier-compensated accumulator; keeps cell sums order-stable.
struct Kahan {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double result() const { return sum + comp; }
};

struct UAccum {
    Kahan bp, ap, bn, an, ain, aip, bin, bip;

    UMatrix finish() const {
        return UMatrix{bp.result(), ap.result(), bn.result(), an.result(),
                       ain.result(), aip.result(), bin.result(), bip.result()};
    }
};

Matrices accumulate_range(std::span<const ScoredPrediction> scored, AccumulateOptions options) {
    Matrices m;
    UAccum u;
    for (const ScoredPrediction& sp : scored) {
        const Class pred = options.suppressed_as_negative ? sp.effective : sp.labeled.predicted_class;
        const bool actual_pos = sp.labeled.actual_class == Class::positive;
        if (pred == Class::positive)
            actual_pos ? ++m.c.tp : ++m.c.fp;
        else
            actual_pos ? ++m.c.fn : ++m.c.tn;

        const double mag = std::abs(sp.utility);
        const double alt = sp.alt_utility;
        switch (sp.cell) {
            case Cell::beneficial_positive:
                u.bp.add(mag);
                if (alt < 0)
                    u.ain.add(-alt);
                else if (alt > 0)
                    ++m.mixed_sign_alt_dropped;  // beneficial either way: no column to book
                break;
            case Cell::adverse_positive:
                u.ap.add(mag);
                if (alt > 0)
                    u.bin.add(alt);
                else if (alt < 0)
                    ++m.mixed_sign_alt_dropped;
                break;
            case Cell::beneficial_negative:
                u.bn.add(mag);
                if (alt < 0)
                    u.aip.add(-alt);
                else if (alt > 0)
                    ++m.mixed_sign_alt_dropped;
                break;
            case Cell::adverse_negative:
                u.an.add(mag);
                if (alt > 0)
                    u.bip.add(alt);
                else if (alt < 0)
                    ++m.mixed_sign_alt_dropped;
                break;
            case Cell::irrelevant:
                break;
        }
    }
    m.u = u.finish();
    return m;
}

}  // namespace

Matrices accumulate(std::span<const ScoredPrediction> scored, AccumulateOptions options) {
    return accumulate_range(scored, options);
}

void merge(Matrices& into, const Matrices& part) {
    into.c.tp += part.c.tp;
    into.c.fp += part.c.fp;
    into.c.tn += part.c.tn;
    into.c.fn += part.c.fn;
    into.u.bp += part.u.bp;
    into.u.ap += part.u.ap;
    into.u.bn += part.u.bn;
    into.u.an += part.u.an;
    into.u.ain += part.u.ain;
    into.u.aip += part.u.aip;
    into.u.bin += part.u.bin;
    into.u.bip += part.u.bip;
    into.mixed_sign_alt_dropped += part.mixed_sign_alt_dropped;
}

Matrices accumulate_parallel(std::span<const ScoredPrediction> scored,
                             AccumulateOptions options, int shards) {
#ifdef _OPENMP
    if (shards <= 0) shards = omp_get_max_threads();
#else
    if (shards <= 0) shards = 1;
#endif
    const std::size_t n = scored.size();
    if (shards < 2 || n < 2) return accumulate_range(scored, options);
    if (static_cast<std::size_t>(shards) > n) shards = static_cast<int>(n);

    std::vector<Matrices> parts(static_cast<std::size_t>(shards));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int s = 0; s < shards; ++s) {
        const std::size_t lo = n * static_cast<std::size_t>(s) / static_cast<std::size_t>(shards);
        const std::size_t hi = n * (static_cast<std::size_t>(s) + 1) / static_cast<std::size_t>(shards);
        parts[static_cast<std::size_t>(s)] = accumulate_range(scored.subspan(lo, hi - lo), options);
    }

    Matrices total;
    for (const Matrices& p : parts) merge(total, p);  // fixed shard order
    return total;
}

CMetrics c_metrics(const CMatrix& m) {
    CMetrics r;
    const auto tp = static_cast<double>(m.tp), fp = static_cast<double>(m.fp);
    const auto tn = static_cast<double>(m.tn), fn = static_cast<double>(m.fn);
    r.sensitivity = ratio(tp, tp + fn);
    r.specificity = ratio(tn, tn + fp);
    r.fpr = ratio(fp, fp + tn);
    r.fnr = ratio(fn, fn + tp);
    r.ppv = ratio(tp, tp + fp);
    r.npv = ratio(tn, tn + fn);
    r.accuracy = ratio(tp + tn, tp + tn + fp + fn);
    if (r.ppv.defined() && r.sensitivity.defined())
        r.f1 = ratio(2.0 * *r.ppv * *r.sensitivity, *r.ppv + *r.sensitivity);
    return r;
}

UMetrics u_metrics(const UMatrix& m) {
    UMetrics r;
    r.u_bpr = ratio(m.bp, m.bp + m.an);
    r.u_bnr = ratio(m.bn, m.bn + m.ap);
    r.u_apr = ratio(m.ap, m.ap + m.bn);
    r.u_anr = ratio(m.an, m.an + m.bp);
    r.u_precision = ratio(m.bp, m.bp + m.ap);
    r.u_npv = ratio(m.bn, m.bn + m.an);
    r.u_recall = ratio(m.bp, m.bp + m.bip);
    r.u_specificity = ratio(m.bn, m.bn + m.bin);
    r.u_adverse_positive_recall = ratio(m.ap, m.ap + m.aip);
    r.u_adverse_negative_recall = ratio(m.an, m.an + m.ain);
    // Restricted to the predictions actually made positive/negative: the
    // counterpart mass is the alternative column of the same row.
    r.u_recall_pos_preds = ratio(m.bp, m.bp + m.bin);
    r.u_recall_neg_preds = ratio(m.bn, m.bn + m.bip);
    return r;
}

DescriptiveMetrics descriptive_metrics(std::span<const ScoredPrediction> scored,
                                       const UMatrix& m, int k) {
    DescriptiveMetrics d;
    d.k = k;
    d.total_ap = m.ap;

    std::unordered_map<std::string, std::int64_t> ap_per_entity;
    for (const ScoredPrediction& sp : scored) {
        ap_per_entity.try_emplace(sp.labeled.record.entity_id, 0);
        if (sp.cell == Cell::adverse_positive) {
            ++d.count_ap;
            ++ap_per_entity[sp.labeled.record.entity_id];
        }
    }

    const auto entities = static_cast<double>(ap_per_entity.size());
    if (entities > 0) {
        std::int64_t zero = 0, k_plus = 0;
        for (const auto& [_, count] : ap_per_entity) {
            if (count == 0) ++zero;
            if (count >= k) ++k_plus;
        }
        d.pct_zero_ap.value = static_cast<double>(zero) / entities;
        d.pct_k_plus_ap.value = static_cast<double>(k_plus) / entities;
    }

    d.adversity_ratio = ratio(m.ap, m.bp);
    const MetricValue uprec = ratio(m.bp, m.bp + m.ap);
    if (uprec.defined() && *uprec > 0.0) d.u_nns.value = 1.0 / *uprec;
    return d;
}

}  // namespace umet
