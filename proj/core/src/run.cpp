#include "vsg/run.hpp"

#include "vsg/errors.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>

namespace vsg {

std::string config_hash(const SolverConfig& c) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "d=%d;n=%d;N=%d;W=%s;K=%.17g;nu=%.17g;delta=%.17g;dt=%.17g;T=%.17g;s=%s;r=%s;f=%d",
                  c.grid.dim(), c.grid.n(), c.grid.cutoff(), to_string(c.model.kind).c_str(), c.model.K, c.nu,
                  c.delta, c.dt, c.t_end, to_string(c.scheme).c_str(), to_string(c.dealias).c_str(),
                  c.forcing ? 1 : 0);
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (const char* p = buf; *p; ++p) {
        h ^= static_cast<unsigned char>(*p);
        h *= 1099511628211ull;
    }
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunResult run(const SolverConfig& config, const State& initial, const RunOptions& options) {
    config.validate();
    if (!initial.grid().same_layout(config.grid)) throw RankMismatch("run: initial state grid differs from config");
    const auto t0 = std::chrono::steady_clock::now();

    RunResult result;
    result.meta.config_hash = config_hash(config);
    if (config.degenerate()) result.meta.flags.push_back("degenerate: nu = delta = 0");
    if (config.grid.cutoff() > dealias_band(config.grid.n(), config.dealias))
        result.meta.flags.push_back("cutoff exceeds dealiasing band");

    const long steps = config.steps();
    const bool recording = options.record_every > 0;
    std::optional<DiagnosticsTracker> tracker;
    if (recording) tracker.emplace(config.model, config.nu, config.delta, options.lr_exponents);

    auto keep = [&](const State& s, long step, bool force_record) {
        const bool snap = options.snapshot_every > 0 && (step % options.snapshot_every == 0 || force_record);
        const bool rec = recording && (step % options.record_every == 0 || force_record);
        if (rec) result.records.push_back(tracker->current());
        if (rec || snap) {
            TrajectorySample sample{s.t, step, std::nullopt};
            if (snap) sample.state = s;
            result.trajectory.push_back(std::move(sample));
        }
    };

    State state = initial;
    if (tracker) tracker->start(state);
    keep(state, 0, true);
    if (options.on_step) options.on_step(state, 0);

    Stepper stepper(config);
    for (long n = 1; n <= steps; ++n) {
        try {
            State next = stepper.step(state);
            // Pin the clock to the grid of steps to avoid drift in t.
            next.t = initial.t + static_cast<double>(n) * config.dt;
            state = std::move(next);
        } catch (const BlowUp& e) {
            result.failure = RunFailure{e.time(), e.norm(), e.what()};
            break;
        }
        if (tracker) tracker->advance(state);
        keep(state, n, n == steps);
        if (options.on_step) options.on_step(state, n);
        result.meta.steps_taken = n;
    }
    result.final_state = std::move(state);
    result.meta.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace vsg
