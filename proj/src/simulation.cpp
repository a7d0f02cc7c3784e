#include "gasnet/simulation.hpp"

#include "gasnet/error.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace gasnet {

std::int64_t step_count(double t_start, double t_end, double dt) {
    const double span = (t_end - t_start) / dt;
    if (span <= 0.0) return 0;
    const double nearest = std::round(span);
    if (std::abs(span - nearest) <= 1e-9 * std::max(1.0, nearest)) {
        return static_cast<std::int64_t>(nearest);
    }
    return static_cast<std::int64_t>(std::ceil(span));
}

namespace {

void check_cfl(double bound, double dt, double safety, double t) {
    if (dt > bound) {
        std::ostringstream msg;
        msg << "dt " << dt << " s exceeds the stability bound " << bound << " s (safety "
            << safety << ") at t = " << t << " s";
        fail(ErrorKind::cfl_violation, msg.str());
    }
}

void check_cfl(const Network& network, double dt, double safety) {
    check_cfl(network.cfl_max_dt(safety), dt, safety, network.time());
}

void check_cfl(const Pipe& pipe, double dt, double safety) {
    check_cfl(cfl_max_dt(pipe, safety), dt, safety, pipe.state.time);
}

void check_options(const RunOptions& options) {
    if (!(options.dt > 0.0)) fail(ErrorKind::validation, "dt must be positive");
    if (!(options.cadence > 0.0)) fail(ErrorKind::validation, "output cadence must be positive");
}

} // namespace

RunSummary run_network(Network& network, const RunOptions& options,
                       const SampleObserver& observer) {
    check_options(options);
    check_cfl(network, options.dt, options.cfl_safety);

    const auto wall_start = std::chrono::steady_clock::now();
    RunSummary summary;
    summary.initial_mass = network.total_mass();

    LedgerSample ledger{network.time(), summary.initial_mass, 0.0, 0.0};
    auto emit = [&] {
        ledger.t = network.time();
        ledger.mass = network.total_mass();
        ledger.discrepancy = ledger.mass - summary.initial_mass - ledger.throughput;
        summary.max_ledger_discrepancy =
            std::max(summary.max_ledger_discrepancy, std::abs(ledger.discrepancy));
        ++summary.samples;
        if (observer) observer(network, ledger);
    };
    emit();

    const double t0 = network.time();
    const auto steps = step_count(t0, options.t_end, options.dt);
    const auto per_sample = std::max<std::int64_t>(1, std::llround(options.cadence / options.dt));
    double mass_before = summary.initial_mass;
    for (std::int64_t s = 1; s <= steps; ++s) {
        network.step(options.dt, options.parallel);
        double inflow = 0.0;
        for (const auto& node : network.nodes()) inflow += node.injection;
        ledger.throughput += options.dt * inflow;
        if (options.audit) {
            const double mass_after = network.total_mass();
            summary.max_step_ledger_error =
                std::max(summary.max_step_ledger_error,
                         std::abs(mass_after - mass_before - options.dt * inflow) / mass_after);
            mass_before = mass_after;
            summary.max_balance_residual =
                std::max(summary.max_balance_residual, network.max_relative_balance_residual());
        }
        if (s % per_sample == 0 || s == steps) {
            emit();
            check_cfl(network, options.dt, options.cfl_safety);
        }
    }
    summary.steps = steps;
    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return summary;
}

RunSummary run_pipe(Pipe& pipe, const PipeBoundary& left, const PipeBoundary& right,
                    const RunOptions& options, const PipeObserver& observer) {
    check_options(options);
    check_cfl(pipe, options.dt, options.cfl_safety);

    const auto wall_start = std::chrono::steady_clock::now();
    RunSummary summary;
    summary.initial_mass = total_mass(pipe);
    const double area = pipe.geometry.area();

    LedgerSample ledger{pipe.state.time, summary.initial_mass, 0.0, 0.0};
    auto emit = [&] {
        ledger.t = pipe.state.time;
        ledger.mass = total_mass(pipe);
        ledger.discrepancy = ledger.mass - summary.initial_mass - ledger.throughput;
        summary.max_ledger_discrepancy =
            std::max(summary.max_ledger_discrepancy, std::abs(ledger.discrepancy));
        ++summary.samples;
        if (observer) observer(pipe, ledger);
    };
    emit();

    const auto steps = step_count(pipe.state.time, options.t_end, options.dt);
    const auto per_sample = std::max<std::int64_t>(1, std::llround(options.cadence / options.dt));
    double mass_before = summary.initial_mass;
    for (std::int64_t s = 1; s <= steps; ++s) {
        step(pipe, left, right, options.dt);
        const double inflow = area * (pipe.state.phi.front() - pipe.state.phi.back());
        ledger.throughput += options.dt * inflow;
        if (options.audit) {
            const double mass_after = total_mass(pipe);
            summary.max_step_ledger_error =
                std::max(summary.max_step_ledger_error,
                         std::abs(mass_after - mass_before - options.dt * inflow) / mass_after);
            mass_before = mass_after;
        }
        if (s % per_sample == 0 || s == steps) {
            emit();
            check_cfl(pipe, options.dt, options.cfl_safety);
        }
    }
    summary.steps = steps;
    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return summary;
}

double snap_dt(double bound, double cadence) {
    if (!(bound > 0.0) || !(cadence > 0.0)) {
        fail(ErrorKind::domain, "snap_dt: bound and cadence must be positive");
    }
    return cadence / std::ceil(cadence / bound);
}

} // namespace gasnet
