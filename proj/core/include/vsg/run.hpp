#pragma once

#include "vsg/diagnostics.hpp"
#include "vsg/evolution.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vsg {

struct RunOptions {
    /// Emit a diagnostics record every this many steps (0: none). The first
    /// and last states are always recorded when > 0.
    int record_every = 1;
    /// Keep a full state snapshot every this many steps (0: none).
    int snapshot_every = 0;
    std::vector<double> lr_exponents;
    /// Called after every step, including step 0 (the initial state).
    std::function<void(const State&, long step)> on_step;
};

struct TrajectorySample {
    double t = 0.0;
    long step = 0;
    std::optional<State> state;
};

struct RunMetadata {
    std::string config_hash;
    double wall_seconds = 0.0;
    long steps_taken = 0;
    std::vector<std::string> flags;
};

struct RunFailure {
    double t = 0.0;
    double norm = 0.0;
    std::string message;
};

struct RunResult {
    std::vector<TrajectorySample> trajectory;
    std::vector<DiagnosticsRecord> records;
    RunMetadata meta;
    std::optional<RunFailure> failure;
    std::optional<State> final_state;

    bool ok() const noexcept { return !failure.has_value(); }
};

/// Integrates from `initial` to config.t_end. On blow-up the partial
/// trajectory and records are kept and `failure` is set.
RunResult run(const SolverConfig& config, const State& initial, const RunOptions& options);

/// Stable hex digest of the physical and numerical parameters of `config`.
std::string config_hash(const SolverConfig& config);

}  // namespace vsg
