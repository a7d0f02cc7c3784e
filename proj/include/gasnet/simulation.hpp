#pragma once

#include "gasnet/network.hpp"

#include <cstdint>
#include <functional>

namespace gasnet {

struct RunOptions {
    double dt = 0.125;       // s
    double t_end = 3600.0;   // s, absolute end time
    double cadence = 60.0;   // s between samples
    double cfl_safety = 0.9;
    bool parallel = false;
    // Assert the per-step mass ledger and junction balance (criteria used by
    // tests; costs one extra pass over the nodes).
    bool audit = false;
};

// Running identity between stored mass and cumulative boundary throughput.
struct LedgerSample {
    double t = 0.0;
    double mass = 0.0;        // kg in all pipes
    double throughput = 0.0;  // kg injected minus withdrawn since the start
    double discrepancy = 0.0; // mass - mass(0) - throughput
};

struct RunSummary {
    std::int64_t steps = 0;
    std::size_t samples = 0;
    double initial_mass = 0.0;
    double max_ledger_discrepancy = 0.0;       // kg, over samples
    double max_step_ledger_error = 0.0;        // relative, per step (audit only)
    double max_balance_residual = 0.0;         // relative, per step (audit only)
    double wall_seconds = 0.0;
};

using SampleObserver = std::function<void(const Network&, const LedgerSample&)>;

// Number of steps of size dt covering [t_start, t_end], tolerant to
// round-off when the span is a multiple of dt.
std::int64_t step_count(double t_start, double t_end, double dt);

// Advances the network from its current time to options.t_end. Throws
// ErrorKind::cfl_violation before the first step (and at each sample) when
// dt exceeds the frozen-coefficient bound at options.cfl_safety.
RunSummary run_network(Network& network, const RunOptions& options,
                       const SampleObserver& observer = {});

using PipeObserver = std::function<void(const Pipe&, const LedgerSample&)>;

// Same loop for a standalone pipe with simple boundary conditions.
RunSummary run_pipe(Pipe& pipe, const PipeBoundary& left, const PipeBoundary& right,
                    const RunOptions& options, const PipeObserver& observer = {});

// Largest step that divides `cadence` evenly and stays below bound.
double snap_dt(double bound, double cadence);

} // namespace gasnet
