#include "gasnet/steady.hpp"

#include "gasnet/error.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace gasnet {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 1>;

struct PressureGradient {
    double drag;  // beta phi |phi|
    const EosModel* eos;

    void operator()(const State& p, State& dpdx, double x) const {
        if (!(p[0] > 0.0)) {
            fail(ErrorKind::infeasible_steady, "steady pressure reached zero along a pipe");
        }
        dpdx[0] = -drag / eos->at(x).density(p[0]);
    }
};

PressureGradient gradient(const PipeGeometry& g, const EosModel& eos, double flow) {
    const double phi = flow / g.area();
    return {g.beta() * phi * std::abs(phi), &eos};
}

auto stepper(double rtol, double p_scale) {
    return odeint::make_dense_output(rtol * p_scale * 1e-3, rtol,
                                     odeint::runge_kutta_dopri5<State>());
}

} // namespace

namespace {

double outlet_between(const PipeGeometry& geometry, const EosModel& eos, double p_in,
                      double flow, double x0, double x1, double rtol) {
    if (!(p_in > 0.0)) {
        fail(ErrorKind::infeasible_steady, "non-positive steady inlet pressure");
    }
    State p{p_in};
    if (flow == 0.0) return p_in;
    odeint::integrate_adaptive(stepper(rtol, p_in), gradient(geometry, eos, flow), p, x0, x1,
                               (x1 - x0) / 64.0);
    if (!(p[0] > 0.0)) {
        fail(ErrorKind::infeasible_steady, "steady pressure reached zero along a pipe");
    }
    return p[0];
}

double flow_between(const PipeGeometry& geometry, const EosModel& eos, double p_in,
                    double p_out, double x0, double x1, double rtol) {
    if (p_in == p_out) return 0.0;
    const double sign = p_in > p_out ? 1.0 : -1.0;
    auto mismatch = [&](double flow) {
        try {
            return outlet_between(geometry, eos, p_in, flow, x0, x1, rtol) - p_out;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::infeasible_steady) throw;
            return -p_out;  // pressure collapsed: flow is too large
        }
    };
    // Ideal-gas estimate p_in^2 - p_out^2 = 2 beta c^2 phi|phi| L sets the scale.
    const auto map = eos.at(x0);
    const double c2 = map.rt / map.b1;
    const double phi_est = std::sqrt(std::abs(p_in * p_in - p_out * p_out) /
                                     (2.0 * std::max(geometry.beta(), 1e-12) * c2 * (x1 - x0)));
    double lo = 0.0;
    double hi = sign * std::max(phi_est, 1e-6) * geometry.area();
    while (sign * mismatch(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) fail(ErrorKind::infeasible_steady, "steady flow bracket failed");
    }
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        mismatch, std::min(lo, hi), std::max(lo, hi), boost::math::tools::eps_tolerance<double>(52),
        iters);
    return 0.5 * (a + b);
}

std::vector<double> profile_from(const PipeGeometry& geometry, const EosModel& eos, double p_in,
                                 double flow, double x0, const std::vector<double>& positions,
                                 double rtol) {
    std::vector<double> out;
    out.reserve(positions.size());
    if (flow == 0.0) {
        out.assign(positions.size(), p_in);
        return out;
    }
    std::vector<double> times;
    times.reserve(positions.size() + 1);
    times.push_back(x0);
    for (double x : positions) {
        if (x > times.back()) times.push_back(x);
    }
    State p{p_in};
    std::vector<double> sampled;
    odeint::integrate_times(stepper(rtol, p_in), gradient(geometry, eos, flow), p, times.begin(),
                            times.end(), geometry.length / 64.0,
                            [&](const State& s, double) { sampled.push_back(s[0]); });
    // positions at or before x0 take p_in
    std::size_t k = 1;
    for (double x : positions) out.push_back(x > x0 ? sampled[k++] : p_in);
    return out;
}

} // namespace

double steady_outlet_pressure(const PipeGeometry& geometry, const EosModel& eos, double p_in,
                              double flow, double rtol) {
    return outlet_between(geometry, eos, p_in, flow, 0.0, geometry.length, rtol);
}

std::vector<double> steady_pressure_profile(const PipeGeometry& geometry, const EosModel& eos,
                                            double p_in, double flow,
                                            const std::vector<double>& positions, double rtol) {
    return profile_from(geometry, eos, p_in, flow, 0.0, positions, rtol);
}

double steady_pipe_flow(const PipeGeometry& geometry, const EosModel& eos, double p_in,
                        double p_out, double rtol) {
    return flow_between(geometry, eos, p_in, p_out, 0.0, geometry.length, rtol);
}

namespace {

struct Evaluation {
    std::vector<double> flow;      // per edge
    std::vector<double> residual;  // per unknown node
    double norm = 0.0;
};

} // namespace

SteadyResult steady_state_solve(Network& network, const SteadyOptions& options) {
    const auto& nodes = network.nodes();
    const auto& edges = network.edges();
    const double t = options.time;

    std::size_t slack = nodes.size();
    std::vector<std::size_t> unknown;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        if (nodes[n].spec.kind == NodeSpec::Kind::slack) {
            if (slack != nodes.size()) {
                fail(ErrorKind::validation, "steady_state_solve needs exactly one slack node");
            }
            slack = n;
        } else {
            unknown.push_back(n);
        }
    }

    std::vector<double> pressure(nodes.size(), 0.0);
    pressure[slack] = nodes[slack].spec.profile(t);

    // Initial guess: walk outward from the slack node, boosting through
    // compressors and dropping 2% per pipe.
    {
        std::vector<bool> seen(nodes.size(), false);
        std::vector<std::size_t> queue{slack};
        seen[slack] = true;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const auto n = queue[head];
            for (const auto& inc : nodes[n].incidences) {
                const auto& e = edges[inc.pipe];
                const auto other = e.from == n ? e.to : e.from;
                if (seen[other]) continue;
                seen[other] = true;
                const double a_in = network.ratio(inc.pipe, PipeEnd::inlet, t);
                const double a_out = network.ratio(inc.pipe, PipeEnd::outlet, t);
                pressure[other] = e.from == n ? pressure[n] * a_in / a_out * 0.98
                                              : pressure[n] * a_out / a_in * 0.98;
                queue.push_back(other);
            }
        }
    }

    auto span_of = [&](std::size_t k) -> std::pair<double, double> {
        const auto& pipe = edges[k].pipe;
        if (options.span == SteadySpan::boundary_cells) {
            return {pipe.grid.center(0), pipe.grid.center(pipe.grid.cells - 1)};
        }
        return {0.0, pipe.geometry.length};
    };

    auto evaluate = [&](const std::vector<double>& p) {
        Evaluation ev;
        ev.flow.resize(edges.size());
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const auto& e = edges[k];
            const double p_in = network.ratio(k, PipeEnd::inlet, t) * p[e.from];
            const double p_out = network.ratio(k, PipeEnd::outlet, t) * p[e.to];
            const auto [x0, x1] = span_of(k);
            ev.flow[k] = flow_between(e.spec.geometry, network.eos(), p_in, p_out, x0, x1,
                                      options.integration_rtol);
        }
        ev.residual.resize(unknown.size());
        for (std::size_t u = 0; u < unknown.size(); ++u) {
            const auto& node = nodes[unknown[u]];
            double r = -node.spec.profile(t);
            for (const auto& inc : node.incidences) r += inc.sgn * ev.flow[inc.pipe];
            ev.residual[u] = r;
            ev.norm = std::max(ev.norm, std::abs(r));
        }
        return ev;
    };

    auto current = evaluate(pressure);
    int iteration = 0;
    while (current.norm > options.balance_tolerance) {
        if (iteration >= options.max_iterations) {
            std::ostringstream msg;
            msg << "steady state did not converge in " << options.max_iterations
                << " iterations; worst nodal residual " << current.norm << " kg/s";
            fail(ErrorKind::steady_nonconvergence, msg.str());
        }
        ++iteration;
        const std::size_t m = unknown.size();
        // Forward-difference Jacobian of residuals w.r.t. unknown pressures.
        std::vector<double> jac(m * m);
        for (std::size_t c = 0; c < m; ++c) {
            auto shifted = pressure;
            const double h = 1e-6 * pressure[unknown[c]];
            shifted[unknown[c]] += h;
            const auto ev = evaluate(shifted);
            for (std::size_t r = 0; r < m; ++r) {
                jac[r * m + c] = (ev.residual[r] - current.residual[r]) / h;
            }
        }
        // Gaussian elimination with partial pivoting on J dp = -r.
        std::vector<double> rhs(m);
        for (std::size_t r = 0; r < m; ++r) rhs[r] = -current.residual[r];
        for (std::size_t col = 0; col < m; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < m; ++r) {
                if (std::abs(jac[r * m + col]) > std::abs(jac[piv * m + col])) piv = r;
            }
            if (jac[piv * m + col] == 0.0) {
                fail(ErrorKind::steady_nonconvergence, "singular steady-state Jacobian");
            }
            if (piv != col) {
                for (std::size_t k = 0; k < m; ++k) std::swap(jac[col * m + k], jac[piv * m + k]);
                std::swap(rhs[col], rhs[piv]);
            }
            for (std::size_t r = col + 1; r < m; ++r) {
                const double f = jac[r * m + col] / jac[col * m + col];
                for (std::size_t k = col; k < m; ++k) jac[r * m + k] -= f * jac[col * m + k];
                rhs[r] -= f * rhs[col];
            }
        }
        std::vector<double> delta(m);
        for (std::size_t r = m; r-- > 0;) {
            double s = rhs[r];
            for (std::size_t k = r + 1; k < m; ++k) s -= jac[r * m + k] * delta[k];
            delta[r] = s / jac[r * m + r];
        }
        // Damped update: halve until the residual shrinks and pressures stay positive.
        double lambda = 1.0;
        bool accepted = false;
        for (int half = 0; half < 40 && !accepted; ++half, lambda *= 0.5) {
            auto trial = pressure;
            bool positive = true;
            for (std::size_t u = 0; u < m; ++u) {
                trial[unknown[u]] += lambda * delta[u];
                positive = positive && trial[unknown[u]] > 0.0;
            }
            if (!positive) continue;
            try {
                auto ev = evaluate(trial);
                if (ev.norm < current.norm) {
                    pressure = std::move(trial);
                    current = std::move(ev);
                    accepted = true;
                }
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::infeasible_steady) throw;
            }
        }
        if (!accepted) {
            std::ostringstream msg;
            msg << "steady-state line search stalled; worst nodal residual " << current.norm
                << " kg/s";
            fail(ErrorKind::steady_nonconvergence, msg.str());
        }
    }

    SteadyResult result;
    result.node_pressure = pressure;
    result.pipe_flow = current.flow;
    result.iterations = iteration;
    result.max_residual = current.norm;

    for (std::size_t k = 0; k < edges.size(); ++k) {
        auto& edge = network.edges()[k];
        auto& pipe = edge.pipe;
        const double p_in = network.ratio(k, PipeEnd::inlet, t) * pressure[edge.from];
        const double p_out = network.ratio(k, PipeEnd::outlet, t) * pressure[edge.to];
        result.pipe_inlet_pressure.push_back(p_in);
        result.pipe_outlet_pressure.push_back(p_out);
        std::vector<double> centers(pipe.grid.cells);
        for (int i = 0; i < pipe.grid.cells; ++i) centers[i] = pipe.grid.center(i);
        const auto profile = profile_from(edge.spec.geometry, network.eos(), p_in,
                                          current.flow[k], span_of(k).first, centers,
                                          options.integration_rtol);
        for (int i = 0; i < pipe.grid.cells; ++i) {
            pipe.state.rho[i] = pipe.cell_eos[i].density(profile[i]);
        }
        std::fill(pipe.state.phi.begin(), pipe.state.phi.end(), current.flow[k] / pipe.geometry.area());
        pipe.state.flux_ready = true;
        pipe.state.step = 0;
        pipe.state.time = t;
    }
    network.set_time(t);
    network.refresh_node_pressures();
    for (std::size_t n = 0; n < nodes.size(); ++n) network.set_node_pressure(n, pressure[n]);
    return result;
}

} // namespace gasnet
