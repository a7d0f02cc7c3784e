#include "gasnet/experiments.hpp"

#include "gasnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gasnet {

// ---- error metrics ------------------------------------------------------

std::vector<double> restrict_nested(const std::vector<double>& fine, std::size_t coarse_size,
                                    GridLayout layout) {
    if (coarse_size == 0 || fine.size() < coarse_size) {
        fail(ErrorKind::domain, "restrict_nested: incompatible grid sizes");
    }
    // centers: fine = r * coarse, coarse i <-> fine r i + (r - 1) / 2
    // faces:   fine - 1 = r * (coarse - 1), coarse j <-> fine r j
    std::size_t r = 0;
    std::size_t offset = 0;
    if (layout == GridLayout::centers) {
        if (fine.size() % coarse_size != 0) fail(ErrorKind::domain, "restrict_nested: grids not nested");
        r = fine.size() / coarse_size;
        offset = (r - 1) / 2;
    } else {
        if (coarse_size < 2 || (fine.size() - 1) % (coarse_size - 1) != 0) {
            fail(ErrorKind::domain, "restrict_nested: grids not nested");
        }
        r = (fine.size() - 1) / (coarse_size - 1);
    }
    std::size_t q = r;
    while (q % 3 == 0) q /= 3;
    if (q != 1) fail(ErrorKind::domain, "restrict_nested: refinement ratio is not a power of 3");

    std::vector<double> out(coarse_size);
    for (std::size_t i = 0; i < coarse_size; ++i) out[i] = fine[r * i + offset];
    return out;
}

double l2_error(const std::vector<double>& a, const std::vector<double>& b, double dx,
                GridLayout layout) {
    const bool a_coarse = a.size() <= b.size();
    const auto& coarse = a_coarse ? a : b;
    const auto fine = restrict_nested(a_coarse ? b : a, coarse.size(), layout);
    const std::size_t n = coarse.size();
    if (n < 2) fail(ErrorKind::domain, "l2_error: need at least two samples");
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = coarse[i] - fine[i];
        sum += (i == 0 || i + 1 == n ? 0.5 : 1.0) * e * e;
    }
    return sum * dx;
}

// ---- self-convergence study --------------------------------------------

double arctan_profile(double x, double length, double mean_density) {
    return mean_density *
           (1.0 - 0.2 / std::numbers::pi * std::atan(10.0 * (x - 0.5 * length) / length));
}

namespace {

// Frictionless ideal pipe driven by the exact right-moving wave at both ends.
struct WavePipe {
    Pipe pipe;
    double c;
    double length;
    double mean;

    WavePipe(int cells, const ConvergenceOptions& o)
        : pipe(Pipe::make({o.length, 1.0, 0.0}, PipeGrid::uniform(o.length, cells),
                          EosModel::ideal(o.wave_speed))),
          c(o.wave_speed), length(o.length), mean(o.mean_density) {
        for (int i = 0; i < cells; ++i) {
            pipe.state.rho[i] = arctan_profile(pipe.grid.center(i), length, mean);
        }
    }

    double exact_flux(double t, double x) const { return c * arctan_profile(x - c * t, length, mean); }

    void exact_faces(double t) {
        for (int j = 0; j <= pipe.cells(); ++j) pipe.state.phi[j] = exact_flux(t, pipe.grid.face(j));
    }

    // Brings the faces to the next half layer. The first call after setting
    // the initial fluxes only fills the boundary faces.
    void flux_half_step(double dt) {
        const double t_half = pipe.state.time + 0.5 * dt;
        if (!pipe.state.flux_ready) interior_flux_update(pipe, dt);
        pipe.state.phi.front() = exact_flux(t_half, 0.0);
        pipe.state.phi.back() = exact_flux(t_half, length);
    }
};

} // namespace

ConvergenceReport run_convergence_study(const ConvergenceOptions& o) {
    if (o.levels < 1) fail(ErrorKind::domain, "convergence study needs at least one level");
    const int L = o.levels;
    const auto pow3 = [](int k) {
        long long r = 1;
        for (int i = 0; i < k; ++i) r *= 3;
        return r;
    };
    const long long fine_ratio = pow3(L);
    const double dt_f = 1.0 / static_cast<double>(fine_ratio);
    const int n_f = static_cast<int>(o.base_cells * fine_ratio);
    const long long horizon_steps = std::llround(o.horizon * fine_ratio);

    WavePipe fine(n_f, o);
    if (dt_f > cfl_max_dt(fine.pipe, 1.0) ||
        o.length / n_f / dt_f < o.wave_speed) {
        fail(ErrorKind::cfl_violation, "convergence study: reference step violates the stability bound");
    }

    // Half-layer indices k (flux at (k + 1/2) dt_f) to capture: initial
    // fluxes for every coarse level and the fluxes half a coarse step past
    // the horizon.
    const int first_level = o.self_reference ? L : 0;
    const int last_level = o.self_reference ? L : L - 1;
    std::vector<long long> start_index, end_index;
    for (int lev = first_level; lev <= last_level; ++lev) {
        const long long r = pow3(L - lev);
        start_index.push_back((r - 1) / 2);
        end_index.push_back(horizon_steps + (r - 1) / 2);
    }
    std::vector<std::vector<double>> start_phi(start_index.size()), end_phi(end_index.size());
    std::vector<double> rho_at_horizon;

    fine.exact_faces(0.5 * dt_f);
    const long long last_step = *std::max_element(end_index.begin(), end_index.end()) + 1;
    for (long long s = 1; s <= last_step; ++s) {
        fine.flux_half_step(dt_f);
        for (std::size_t m = 0; m < start_index.size(); ++m) {
            if (start_index[m] == s - 1) start_phi[m] = fine.pipe.state.phi;
            if (end_index[m] == s - 1) end_phi[m] = fine.pipe.state.phi;
        }
        if (s == last_step) break;
        density_update(fine.pipe, dt_f);
        if (s == horizon_steps) rho_at_horizon = fine.pipe.state.rho;
    }

    ConvergenceReport report;
    for (int lev = first_level; lev <= last_level; ++lev) {
        const std::size_t m = static_cast<std::size_t>(lev - first_level);
        const long long scale = pow3(lev);
        const double dt_c = 1.0 / static_cast<double>(scale);
        const int n_c = static_cast<int>(o.base_cells * scale);
        WavePipe coarse(n_c, o);
        coarse.pipe.state.phi = restrict_nested(start_phi[m], n_c + 1, GridLayout::faces);
        const long long steps = std::llround(o.horizon * scale);
        for (long long s = 0; s < steps; ++s) {
            coarse.flux_half_step(dt_c);
            density_update(coarse.pipe, dt_c);
        }
        const auto rho_c = coarse.pipe.state.rho;
        coarse.flux_half_step(dt_c);
        const double dx_c = coarse.pipe.grid.dx;

        std::vector<double> p_fine(rho_at_horizon.size()), p_coarse(rho_c.size());
        for (std::size_t i = 0; i < p_fine.size(); ++i) p_fine[i] = fine.pipe.cell_eos[i].pressure(rho_at_horizon[i]);
        for (std::size_t i = 0; i < p_coarse.size(); ++i) p_coarse[i] = coarse.pipe.cell_eos[i].pressure(rho_c[i]);

        report.dt.push_back(dt_c);
        report.cells.push_back(n_c);
        report.errors[0].push_back(std::sqrt(l2_error(rho_c, rho_at_horizon, dx_c, GridLayout::centers)));
        report.errors[1].push_back(std::sqrt(l2_error(p_coarse, p_fine, dx_c, GridLayout::centers)));
        report.errors[2].push_back(std::sqrt(l2_error(coarse.pipe.state.phi, end_phi[m], dx_c, GridLayout::faces)));
    }

    const std::size_t n = report.dt.size();
    if (n >= 2) {
        for (std::size_t v = 0; v < 3; ++v) {
            const auto& e = report.errors[v];
            report.rates[v].last_two = std::log(e[n - 2] / e[n - 1]) / std::log(3.0);
            report.rates[v].endpoint =
                std::log(e[0] / e[n - 1]) / (static_cast<double>(n - 1) * std::log(3.0));
        }
    }
    return report;
}

TravelingWaveResult run_traveling_wave(int cells, double dt, double t_end,
                                       const ConvergenceOptions& setup, double cfl_safety) {
    WavePipe wave(cells, setup);
    const double bound = cfl_max_dt(wave.pipe, cfl_safety);
    if (dt > bound) {
        fail(ErrorKind::cfl_violation, "traveling wave: dt " + std::to_string(dt) +
                                           " s exceeds the stability bound " + std::to_string(bound) + " s");
    }
    wave.exact_faces(0.5 * dt);
    const auto steps = step_count(0.0, t_end, dt);
    for (std::int64_t s = 0; s < steps; ++s) {
        wave.flux_half_step(dt);
        density_update(wave.pipe, dt);
    }
    std::vector<double> exact(cells);
    const double shift = setup.wave_speed * wave.pipe.state.time;
    for (int i = 0; i < cells; ++i) {
        exact[i] = arctan_profile(wave.pipe.grid.center(i) - shift, setup.length, setup.mean_density);
    }
    TravelingWaveResult out;
    out.dx = wave.pipe.grid.dx;
    out.dt = dt;
    out.t_end = wave.pipe.state.time;
    out.error = std::sqrt(l2_error(wave.pipe.state.rho, exact, out.dx, GridLayout::centers));
    return out;
}

// ---- single-pipe transients --------------------------------------------

namespace {

constexpr double kScenarioPressure = 6.5e6;
constexpr double kIdealWaveSpeed = 338.25;

EosModel scenario_eos(const std::string& name) {
    if (name == "ideal") return EosModel::ideal(kIdealWaveSpeed);
    if (name == "cnga") return EosModel::cnga();
    fail(ErrorKind::validation, "unknown eos '" + name + "' (expected ideal or cnga)");
}

EndSample end_sample(const Pipe& pipe, Side side) {
    const int cell = side == Side::left ? 0 : pipe.cells() - 1;
    const int face = side == Side::left ? 0 : pipe.cells();
    return {pipe.pressure(cell), pipe.state.rho[cell], pipe.state.phi[face], pipe.face_velocity(face)};
}

} // namespace

PipeScenario fast_transient_scenario(const std::string& eos) {
    auto model = scenario_eos(eos);
    TimeProfile steps(TimeProfile::StepSequence{{{600.0, 0.0}, {1800.0, 1200.0}, {std::numeric_limits<double>::infinity(), 120.0}}});
    return {{20000.0, 0.9144, 0.01},
            model,
            kScenarioPressure,
            0.0,
            PipeBoundary::pressure(TimeProfile::constant(kScenarioPressure)),
            PipeBoundary::flux(std::move(steps)),
            100.0,
            3600.0};
}

PipeScenario slow_transient_scenario(const std::string& eos, int periods) {
    if (periods < 1) fail(ErrorKind::validation, "slow transient needs at least one period");
    const double t_scale = 6.0 * 3600.0;
    TimeProfile left(TimeProfile::Harmonic{kScenarioPressure, 0.25, std::numbers::pi / t_scale, 0.0});
    return {{50000.0, 0.9144, 0.01},
            scenario_eos(eos),
            kScenarioPressure,
            240.0,
            PipeBoundary::pressure(std::move(left)),
            PipeBoundary::flux(TimeProfile::constant(240.0)),
            500.0,
            periods * 2.0 * t_scale};
}

PipeScenario temperature_scenario(double decay_rate) {
    if (!(decay_rate >= 0.0)) fail(ErrorKind::validation, "decay rate must be non-negative");
    const double t1 = kTemperatureForcingStart;
    const double t_scale = 12.0 * 3600.0;
    const double phi0 = 289.0;
    TimeProfile left(TimeProfile::Harmonic{kScenarioPressure, 0.1, 6.0 * std::numbers::pi / t_scale,
                                           t1, true, false, t1});
    TimeProfile right(TimeProfile::Harmonic{phi0, 0.1, 4.0 * std::numbers::pi / t_scale, t1, true,
                                            false, t1});
    TemperatureProfile profile{288.706, 40.0, decay_rate};
    return {{100000.0, 0.5, 0.011},
            EosModel::cnga_nonisothermal(profile, 0.650784),
            kScenarioPressure,
            phi0,
            PipeBoundary::pressure(std::move(left)),
            PipeBoundary::flux(std::move(right)),
            200.0,
            t1 + t_scale};
}

TransientReport run_pipe_scenario(const PipeScenario& sc, const std::string& name,
                                  const TransientOptions& options) {
    const double dx = options.dx > 0.0 ? options.dx : sc.default_dx;
    auto pipe = Pipe::make(sc.geometry, PipeGrid::from_target(sc.geometry.length, dx), sc.eos);
    for (int i = 0; i < pipe.cells(); ++i) {
        pipe.state.rho[i] = pipe.cell_eos[i].density(sc.initial_pressure);
    }
    std::fill(pipe.state.phi.begin(), pipe.state.phi.end(), sc.initial_flux);

    RunOptions run;
    run.cadence = options.cadence;
    run.cfl_safety = options.cfl_safety;
    run.t_end = options.t_end > 0.0 ? options.t_end : sc.default_t_end;
    run.dt = options.dt > 0.0
                 ? options.dt
                 : snap_dt(options.cfl_safety * pipe.grid.dx / wave_speed_bound(pipe), options.cadence);

    TransientReport report;
    report.scenario = name;
    report.eos = sc.eos.name();
    report.dx = pipe.grid.dx;
    report.dt = run.dt;
    report.run = run_pipe(pipe, sc.left, sc.right, run, [&](const Pipe& p, const LedgerSample& s) {
        report.series.t.push_back(s.t);
        report.series.left.push_back(end_sample(p, Side::left));
        report.series.right.push_back(end_sample(p, Side::right));
    });
    return report;
}

TransientReport run_fast_transient(const std::string& eos, const TransientOptions& options) {
    return run_pipe_scenario(fast_transient_scenario(eos), "fast_transient", options);
}

TransientReport run_slow_transient(const std::string& eos, const TransientOptions& options,
                                   int periods) {
    return run_pipe_scenario(slow_transient_scenario(eos, periods), "slow_transient", options);
}

TransientReport run_temperature_effect(double decay_rate, const TransientOptions& options) {
    return run_pipe_scenario(temperature_scenario(decay_rate), "temperature", options);
}

double rms_difference(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty()) fail(ErrorKind::domain, "rms_difference: size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(sum / static_cast<double>(a.size()));
}

bool TemperatureComparison::left_dominates() const {
    return left_flux_relative > std::max({right_pressure_relative, right_density_relative, right_flux_relative,
                                          right_velocity_relative});
}

TemperatureComparison compare_temperature_runs(const TransientReport& a, const TransientReport& b, double from) {
    const auto& sa = a.series;
    const auto& sb = b.series;
    if (sa.t != sb.t) fail(ErrorKind::domain, "compare_temperature_runs: sample times differ");
    std::size_t first = 0;
    while (first < sa.t.size() && sa.t[first] < from) ++first;
    if (first == sa.t.size()) fail(ErrorKind::domain, "compare_temperature_runs: no samples after forcing start");

    auto relative = [&](const std::vector<EndSample>& x, const std::vector<EndSample>& y, double EndSample::*field,
                        double* absolute = nullptr) {
        std::vector<double> u, w;
        double mean = 0.0;
        for (std::size_t i = first; i < x.size(); ++i) {
            u.push_back(x[i].*field);
            w.push_back(y[i].*field);
            mean += std::abs(x[i].*field);
        }
        mean /= static_cast<double>(u.size());
        const double rms = rms_difference(u, w);
        if (absolute) *absolute = rms;
        return mean > 0.0 ? rms / mean : rms;
    };
    TemperatureComparison c;
    c.left_flux_relative = relative(sa.left, sb.left, &EndSample::phi, &c.left_flux_rms);
    c.right_pressure_relative = relative(sa.right, sb.right, &EndSample::p);
    c.right_density_relative = relative(sa.right, sb.right, &EndSample::rho);
    c.right_flux_relative = relative(sa.right, sb.right, &EndSample::phi);
    c.right_velocity_relative = relative(sa.right, sb.right, &EndSample::v);
    return c;
}

// ---- five-node network -----------------------------------------------------

NetworkDefinition five_node_definition(bool schedules, const FiveNodeData& d) {
    const double T = d.period;
    const double w = 2.0 * std::numbers::pi / T;
    auto frozen = [](double v) { return TimeProfile::constant(v); };

    NetworkDefinition def;
    def.nodes = {
        {"1", NodeSpec::Kind::slack, frozen(d.slack_pressure)},
        {"2", NodeSpec::Kind::demand, frozen(0.0)},
        {"3", NodeSpec::Kind::demand,
         schedules ? TimeProfile(TimeProfile::Harmonic{0.9 * d.d3, 0.1 * d.d3, 2.0 * w, 0.0, false, true}, T)
                   : frozen(d.d3)},
        {"4", NodeSpec::Kind::demand, frozen(0.0)},
        {"5", NodeSpec::Kind::demand,
         schedules ? TimeProfile(TimeProfile::PiecewiseLinear{{{0.0, d.d5},
                                                               {12000.0, d.d5},
                                                               {15600.0, 1.2 * d.d5},
                                                               {48000.0, 1.2 * d.d5},
                                                               {51600.0, d.d5},
                                                               {86400.0, d.d5}}},
                                 T)
                   : frozen(d.d5)},
    };
    def.pipes = {
        {"1", "1", "2", {20000.0, 0.9144, 0.01}},
        {"2", "2", "3", {70000.0, 0.9144, 0.01}},
        {"3", "3", "4", {10000.0, 0.9144, 0.01}},
        {"4", "2", "4", {60000.0, 0.6350, 0.015}},
        {"5", "4", "5", {80000.0, 0.9144, 0.01}},
    };
    def.compressors = {
        {"1", "1", PipeEnd::inlet,
         schedules ? TimeProfile(TimeProfile::Harmonic{0.9 * d.c1, 0.1 * d.c1, w, 0.0, false, true}, T)
                   : frozen(d.c1)},
        {"2", "2", PipeEnd::inlet,
         schedules ? TimeProfile(TimeProfile::PiecewiseLinear{{{0.0, d.c2},
                                                               {21600.0, d.c2},
                                                               {25200.0, 1.4 * d.c2},
                                                               {64800.0, 1.4 * d.c2},
                                                               {68400.0, d.c2},
                                                               {86400.0, d.c2}}},
                                 T)
                   : frozen(d.c2)},
        {"3", "5", PipeEnd::inlet,
         schedules ? TimeProfile(TimeProfile::Harmonic{1.25 * d.c3, -0.25 * d.c3, 3.0 * w, 0.0, false, true}, T)
                   : frozen(d.c3)},
    };
    return def;
}

FiveNodeReport run_five_node_network(const FiveNodeOptions& o, const SampleObserver& observer) {
    Network net(five_node_definition(true), o.eos, o.dx);
    FiveNodeReport report;
    report.initial = steady_state_solve(net);

    RunOptions run;
    run.cadence = o.cadence;
    run.cfl_safety = o.cfl_safety;
    run.t_end = o.t_end;
    run.parallel = o.parallel;
    run.audit = o.audit;
    if (o.dt > 0.0) {
        run.dt = o.dt;
    } else {
        double bound = std::numeric_limits<double>::infinity();
        for (const auto& e : net.edges()) {
            bound = std::min(bound, o.cfl_safety * e.pipe.grid.dx / wave_speed_bound(e.pipe));
        }
        run.dt = snap_dt(bound, o.cadence);
    }
    report.run = run_network(net, run, [&](const Network& n, const LedgerSample& s) {
        NetworkSample sample{s.t, s, {}, {}};
        for (const auto& node : n.nodes()) {
            sample.node_pressure.push_back(node.pressure);
            sample.node_injection.push_back(node.injection);
        }
        report.samples.push_back(std::move(sample));
        if (observer) observer(n, s);
    });
    return report;
}

} // namespace gasnet
