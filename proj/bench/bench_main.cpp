// Times the OpenMP kernels against their serial reference implementations
// on a synthetic workload and verifies the outputs agree.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "umet/matrix.hpp"
#include "umet/snooze.hpp"
#include "umet/sweep.hpp"
#include "umet/synth.hpp"
#include "umet/timeline.hpp"

using namespace umet;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void print_row(const char* kernel, double serial_ms, double parallel_ms, bool equal) {
    std::printf("%-22s %10.1f ms %10.1f ms %8.2fx   %s\n", kernel, serial_ms, parallel_ms,
                parallel_ms > 0 ? serial_ms / parallel_ms : 0.0, equal ? "outputs equal" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    int entities = argc > 1 ? std::atoi(argv[1]) : 400;
    if (entities <= 0) entities = 400;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif

    SynthSpec spec;
    spec.seed = 7;
    spec.entities = entities;
    spec.horizon = hours(48);
    spec.prediction_cadence = minutes(5);
    spec.event_rate = 2.0;
    spec.score_model.in_window_lift = 0.4;

    std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    auto t0 = Clock::now();
    const SynthOutput gen_serial = generate(spec, ExecMode::serial);
    const double synth_serial = ms_since(t0);
    t0 = Clock::now();
    const SynthOutput gen_parallel = generate(spec, ExecMode::parallel);
    const double synth_parallel = ms_since(t0);
    print_row("synth generate", synth_serial, synth_parallel,
              gen_serial.predictions_csv == gen_parallel.predictions_csv &&
                  gen_serial.events_csv == gen_parallel.events_csv);

    const Dataset data = generate_dataset(spec);

    SweepConfig cfg;
    for (int i = 0; i <= 20; ++i) cfg.cutoff_grid.push_back(i / 20.0);
    cfg.snooze_grid = {SnoozePolicy{}, SnoozePolicy::parse("time:15m"),
                       SnoozePolicy::parse("time:30m"), SnoozePolicy::parse("time:1h"),
                       SnoozePolicy::parse("while-positive")};
    cfg.scenario = ScenarioConfig::builtin("C");
    cfg.window_length = hours(1);

    t0 = Clock::now();
    const PerformanceTable sweep_serial = run_sweep(data, cfg, ExecMode::serial);
    const double sweep_serial_ms = ms_since(t0);
    t0 = Clock::now();
    const PerformanceTable sweep_parallel = run_sweep(data, cfg, ExecMode::parallel);
    const double sweep_parallel_ms = ms_since(t0);
    print_row("sweep grid", sweep_serial_ms, sweep_parallel_ms,
              sweep_serial.to_csv() == sweep_parallel.to_csv());

    const auto windows = build_event_windows(data.events, cfg.window_length);
    const auto scored =
        score_stream(label_predictions(data.predictions, windows, 0.5), cfg.scenario);

    constexpr int kReps = 50;
    Matrices acc_serial, acc_parallel;
    t0 = Clock::now();
    for (int i = 0; i < kReps; ++i) acc_serial = accumulate(scored);
    const double acc_serial_ms = ms_since(t0) / kReps;
    t0 = Clock::now();
    for (int i = 0; i < kReps; ++i) acc_parallel = accumulate_parallel(scored);
    const double acc_parallel_ms = ms_since(t0) / kReps;
    const bool acc_equal = std::abs(acc_serial.u.bp - acc_parallel.u.bp) <= 1e-12 &&
                           std::abs(acc_serial.u.ap - acc_parallel.u.ap) <= 1e-12 &&
                           std::abs(acc_serial.u.aip - acc_parallel.u.aip) <= 1e-12 &&
                           acc_serial.c.tp == acc_parallel.c.tp;
    std::printf("%-22s %10.3f ms %10.3f ms %8.2fx   %s  (%zu records)\n", "matrix accumulate",
                acc_serial_ms, acc_parallel_ms,
                acc_parallel_ms > 0 ? acc_serial_ms / acc_parallel_ms : 0.0,
                acc_equal ? "outputs equal" : "MISMATCH", scored.size());
    return 0;
}
