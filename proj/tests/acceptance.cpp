// Acceptance report: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "gasnet/error.hpp"
#include "gasnet/experiments.hpp"
#include "gasnet/pipe.hpp"
#include "gasnet/steady.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace gasnet;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome convergence_order() {
    const auto r = run_convergence_study({});
    const auto& rho = r.rates[0];
    const auto& p = r.rates[1];
    const auto& phi = r.rates[2];
    const bool last_two = std::abs(rho.last_two - 2.04) <= 0.15 && std::abs(p.last_two - 2.04) <= 0.15;
    const bool endpoint = std::abs(rho.endpoint - 2.24) <= 0.15 && std::abs(p.endpoint - 2.24) <= 0.15;
    const bool flux = phi.last_two >= 2.5 && phi.endpoint >= 2.5;
    return {last_two && endpoint && flux,
            fmt("last-two rho %.3f p %.3f (2.04+-0.15: %s); endpoint rho %.3f p %.3f (2.24+-0.15: %s); "
                "phi last-two %.3f endpoint %.3f (>=2.5: %s)",
                rho.last_two, p.last_two, last_two ? "ok" : "out", rho.endpoint, p.endpoint,
                endpoint ? "ok" : "out", phi.last_two, phi.endpoint, flux ? "ok" : "out")};
}

Outcome eos_points() {
    const auto m = EosModel::cnga().at();
    const double p0 = 6.5e6;
    const double z = m.compressibility(p0);
    const double rho = m.density(p0);
    const double c = std::sqrt(p0 / rho);
    const bool zok = std::abs(z - 0.83616) <= 1e-5;
    const bool rok = std::abs(rho - 56.817) <= 0.01;
    const bool cok = std::abs(c - 338.25) <= 0.01;
    return {zok && rok && cok, fmt("Z %.7f (0.83616+-1e-5: %s); rho %.4f (56.817+-0.01: %s); "
                                   "sqrt(p0/rho0) %.4f (338.25+-0.01: %s)",
                                   z, zok ? "ok" : "out", rho, rok ? "ok" : "out", c, cok ? "ok" : "out")};
}

Outcome steady_table() {
    Network net(five_node_definition(false), EosModel::ideal(377.9683), 1000.0);
    SteadyOptions opt;
    opt.span = SteadySpan::pipe_length;
    const auto res = steady_state_solve(net, opt);
    const double flows[] = {300.0, 233.3, 83.33, 66.66, 150.0};
    const double p_in[] = {5.2710811, 5.1317472, 3.5400783, 4.6112053, 4.2901680};
    const double p_out[] = {4.6112053, 3.5400783, 3.5043953, 3.5043953, 3.4473786};
    double worst_flow = 0.0, worst_p = 0.0;
    for (int e = 0; e < 5; ++e) {
        worst_flow = std::max(worst_flow, rel(res.pipe_flow[e], flows[e]));
        worst_p = std::max({worst_p, rel(res.pipe_inlet_pressure[e] / 1e6, p_in[e]),
                            rel(res.pipe_outlet_pressure[e] / 1e6, p_out[e])});
    }
    const double algebra = std::max({rel(3447378.645 * 1.5290113, 5.2710811e6), rel(4.6112053 * 1.1128863, 5.1317472),
                                     rel(3.5043953 * 1.2242249, 4.2901680),
                                     rel(res.pipe_inlet_pressure[0], 1.5290113 * res.node_pressure[0]),
                                     rel(res.pipe_inlet_pressure[1], 1.1128863 * res.node_pressure[1]),
                                     rel(res.pipe_inlet_pressure[4], 1.2242249 * res.node_pressure[3])});
    const bool ok = worst_flow <= 5e-3 && worst_p <= 5e-3 && algebra <= 1e-6;
    return {ok, fmt("ideal gas c=377.9683: max flow error %.2e, max end-pressure error %.2e (<=5e-3); "
                    "compressor algebra %.2e (<=1e-6)",
                    worst_flow, worst_p, algebra)};
}

struct NetworkAudit {
    double ledger = 0.0;       // worst |discrepancy| / system mass over samples
    double balance = 0.0;      // worst junction residual / max incident flow over steps
    double step_ledger = 0.0;  // worst per-step ledger error, relative
    std::int64_t steps = 0;
    double dt = 0.0;
};

const NetworkAudit& five_node_audit() {
    static const NetworkAudit audit = [] {
        FiveNodeOptions o;
        o.dx = 500.0;
        o.dt = 0.0;
        o.t_end = 3600.0;
        o.audit = true;
        NetworkAudit a;
        const auto r = run_five_node_network(o);
        for (const auto& s : r.samples) a.ledger = std::max(a.ledger, std::abs(s.ledger.discrepancy) / s.ledger.mass);
        a.balance = r.run.max_balance_residual;
        a.step_ledger = r.run.max_step_ledger_error;
        a.steps = r.run.steps;
        a.dt = 3600.0 / static_cast<double>(r.run.steps);
        return a;
    }();
    return audit;
}

Outcome mass_conservation() {
    const auto& a = five_node_audit();
    auto pipe = Pipe::make({20000.0, 0.9144, 0.01}, PipeGrid::uniform(20000.0, 100), EosModel::cnga());
    std::mt19937 gen(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& r : pipe.state.rho) r = 56.0 + 2.0 * u(gen);
    for (auto& f : pipe.state.phi) f = 150.0 * u(gen);
    pipe.state.phi.front() = pipe.state.phi.back() = 0.0;
    const auto wall = PipeBoundary::flux(TimeProfile::constant(0.0));
    const double dt = cfl_max_dt(pipe, 0.9);
    double worst = 0.0;
    for (int k = 0; k < 20000; ++k) {
        const double before = total_mass(pipe);
        step(pipe, wall, wall, dt);
        worst = std::max(worst, std::abs(total_mass(pipe) - before) / before);
    }
    const bool ok = a.ledger <= 1e-9 && worst <= 1e-12;
    return {ok, fmt("five-node 1 h, dx=500, dt=%.4g (%lld steps): max ledger/mass %.2e (<=1e-9); "
                    "closed pipe 20000 steps: max per-step relative change %.2e (<=1e-12)",
                    a.dt, static_cast<long long>(a.steps), a.ledger, worst)};
}

Outcome friction_inverse() {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    const int n = 1000000;
    for (int k = 0; k < n; ++k) {
        const double y = (u(gen) < 0.5 ? -1.0 : 1.0) * std::pow(10.0, -8.0 + 16.0 * u(gen));
        // a|y| log-uniform over [1e-16, 1e2]; every tenth sample has a = 0
        const double a = k % 10 == 0 ? 0.0 : std::pow(10.0, -16.0 + 18.0 * u(gen)) / std::abs(y);
        const double x = friction_invert(y, a);
        const double back = x + a * x * std::abs(x);
        worst = std::max(worst, std::abs(back - y) / std::max(1.0, std::abs(y)));
    }
    return {worst <= 1e-12, fmt("%d samples, max |F(F^-1(y)) - y| / max(1,|y|) = %.2e (<=1e-12)", n, worst)};
}

struct WaveSetup {
    ConvergenceOptions setup;
    int cells = 22 * 9;
    double dt = 1.0 / 9.0;
    double t_end() const { return std::round(1000.0 / (setup.wave_speed * dt)) * dt; }
};

Outcome traveling_wave() {
    const WaveSetup w;
    const auto coarse = run_traveling_wave(w.cells, w.dt, w.t_end(), w.setup);
    const auto fine = run_traveling_wave(3 * w.cells, w.dt / 3.0, w.t_end(), w.setup);
    const double ratio = coarse.error / fine.error;
    return {ratio >= 8.0, fmt("advance %.1f m: error %.3e (dx=%.2f) -> %.3e (dx=%.2f), ratio %.2f (>=8)",
                              w.setup.wave_speed * w.t_end(), coarse.error, coarse.dx, fine.error, fine.dx, ratio)};
}

Outcome junction_balance() {
    const auto& a = five_node_audit();
    return {a.balance <= 1e-12,
            fmt("five-node 1 h run, every step: max residual / max incident S|phi| = %.2e (<=1e-12)", a.balance)};
}

Outcome qualitative() {
    TransientOptions o;
    o.dx = 200.0;
    auto vmax = [](const TransientReport& r) {
        double v = 0.0;
        for (const auto& s : r.series.right) v = std::max(v, std::abs(s.v));
        return v;
    };
    const double v_ideal = vmax(run_fast_transient("ideal", o));
    const double v_cnga = vmax(run_fast_transient("cnga", o));
    const auto c = compare_temperature_runs(run_temperature_effect(1e-3, o), run_temperature_effect(1e-4, o));
    const bool fast = v_cnga > v_ideal;
    const bool temp = c.left_dominates();
    return {fast && temp,
            fmt("fast transient max outlet velocity cnga %.3f > ideal %.3f m/s: %s; temperature r=1e-3 vs 1e-4 "
                "relative RMS left flux %.4f > right p %.4f, rho %.4f, phi %.4f, v %.4f: %s",
                v_cnga, v_ideal, fast ? "yes" : "no", c.left_flux_relative, c.right_pressure_relative,
                c.right_density_relative, c.right_flux_relative, c.right_velocity_relative, temp ? "yes" : "no")};
}

Outcome stability_guard() {
    const WaveSetup w;
    const double dx = w.setup.length / w.cells;
    const double dt = 1.05 * dx / w.setup.wave_speed;
    try {
        const auto r = run_traveling_wave(w.cells, dt, 100 * dt, w.setup, 1.0);
        return {false, fmt("dt=%.4g ran to completion (error %.3e)", dt, r.error)};
    } catch (const Error& e) {
        const bool ok = e.kind() == ErrorKind::cfl_violation || e.kind() == ErrorKind::positivity_loss ||
                        e.kind() == ErrorKind::instability;
        return {ok, fmt("dt=1.05 dx/c=%.4g stopped with %s", dt, std::string(to_string(e.kind())).c_str())};
    }
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"convergence order", convergence_order},
        {"eos point values", eos_points},
        {"steady state vs reference initial data", steady_table},
        {"discrete mass conservation", mass_conservation},
        {"friction inversion", friction_inverse},
        {"traveling wave refinement", traveling_wave},
        {"junction balance", junction_balance},
        {"qualitative transient claims", qualitative},
        {"stability guard", stability_guard},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("unexpected error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %zu. %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
