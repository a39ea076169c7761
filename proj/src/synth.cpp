#include "umet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "umet/errors.hpp"
#include "umet/io.hpp"

namespace umet {

void SynthSpec::validate() const {
    if (entities <= 0) throw ConfigError("entity count must be positive");
    if (horizon.ms <= 0) throw ConfigError("horizon must be positive");
    if (prediction_cadence.ms <= 0) throw ConfigError("prediction cadence must be positive");
    if (event_rate < 0) throw ConfigError("event rate must be >= 0");
    if (score_model.sentinel_probability < 0 || score_model.sentinel_probability > 1)
        throw ConfigError("sentinel probability must lie in [0,1]");
    if (score_model.sentinel_probability > 0 &&
        score_model.sentinel_duration.ms >= score_model.sentinel_lead.ms)
        throw ConfigError("sentinel must resolve before the event (duration < lead)");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Uniform in [0,1) from the engine's raw output; distributions from
// <random> are not pinned down by the standard, this is.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    // [lo, hi], hi >= lo
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(rng() % span);
}

int poisson_draw(std::mt19937_64& rng, double lambda) {
    if (lambda <= 0) return 0;
    // Knuth's product method; fine for the small rates used here.
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform01(rng);
    } while (p > limit);
    return k - 1;
}

std::string entity_name(int index, int total) {
    int width = 1;
    for (int n = total - 1; n >= 10; n /= 10) ++width;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "e%0*d", width, index);
    return buf;
}

struct EntityStream {
    std::string predictions;
    std::string events;
};

EntityStream generate_entity(const SynthSpec& spec, int index) {
    const ScoreModel& sm = spec.score_model;
    std::mt19937_64 rng(splitmix64(spec.seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(index + 1))));
    const std::string name = entity_name(index, spec.entities);

    // Event placement: Poisson count, uniform instants, strictly increasing.
    const int count = poisson_draw(rng, spec.event_rate);
    std::vector<std::int64_t> event_ms;
    event_ms.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        event_ms.push_back(uniform_int(rng, spec.prediction_cadence.ms, spec.horizon.ms));
    std::sort(event_ms.begin(), event_ms.end());
    for (std::size_t i = 1; i < event_ms.size(); ++i)
        if (event_ms[i] <= event_ms[i - 1]) event_ms[i] = event_ms[i - 1] + 1;

    // Sentinel transients: an early burst that resolves before its event.
    std::vector<std::pair<std::int64_t, std::int64_t>> sentinels;
    for (std::int64_t ev : event_ms)
        if (sm.sentinel_probability > 0 && uniform01(rng) < sm.sentinel_probability) {
            const std::int64_t from = ev - sm.sentinel_lead.ms;
            sentinels.emplace_back(from, from + sm.sentinel_duration.ms);
        }

    EntityStream out;
    for (std::int64_t ev : event_ms) {
        out.events += name;
        out.events += ',';
        out.events += format_instant(Instant{ev});
        out.events += '\n';
    }

    // Clustered noise: hold one level for roughly cluster_persistence.
    const std::int64_t steps_per_cluster =
        std::max<std::int64_t>(1, sm.cluster_persistence.ms / spec.prediction_cadence.ms);
    std::int64_t cluster_left = 0;
    double cluster_level = 0.0;

    char line[96];
    for (std::int64_t t = 0; t <= spec.horizon.ms; t += spec.prediction_cadence.ms) {
        if (cluster_left == 0) {
            cluster_level = (uniform01(rng) * 2.0 - 1.0) * sm.noise;
            cluster_left = 1 + uniform_int(rng, 0, 2 * steps_per_cluster - 1);
        }
        --cluster_left;

        double score = sm.baseline + cluster_level;
        bool lifted = false;
        for (std::int64_t ev : event_ms)
            if (t < ev && ev - t <= sm.lift_lead.ms) {
                lifted = true;
                break;
            }
        if (lifted) score += sm.in_window_lift;
        if (!lifted)
            for (const auto& [from, to] : sentinels)
                if (t >= from && t < to) {
                    score += sm.in_window_lift;
                    break;
                }
        score = std::clamp(score, 0.0, 1.0);

        std::snprintf(line, sizeof(line), "%s,%s,%.6f\n", name.c_str(),
                      format_instant(Instant{t}).c_str(), score);
        out.predictions += line;
    }
    return out;
}

}  // namespace

SynthOutput generate(const SynthSpec& spec, ExecMode mode) {
    spec.validate();
    std::vector<EntityStream> streams(static_cast<std::size_t>(spec.entities));

    if (mode == ExecMode::serial) {
        for (int i = 0; i < spec.entities; ++i)
            streams[static_cast<std::size_t>(i)] = generate_entity(spec, i);
    } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int i = 0; i < spec.entities; ++i)
            streams[static_cast<std::size_t>(i)] = generate_entity(spec, i);
    }

    SynthOutput out;
    out.predictions_csv = "entity_id,timestamp,score\n";
    out.events_csv = "entity_id,timestamp\n";
    for (const EntityStream& s : streams) {
        out.predictions_csv += s.predictions;
        out.events_csv += s.events;
    }
    return out;
}

Dataset generate_dataset(const SynthSpec& spec) {
    const SynthOutput out = generate(spec);
    Dataset data;
    data.predictions = parse_predictions(out.predictions_csv);
    data.events = parse_events(out.events_csv);
    return data;
}

}  // namespace umet
