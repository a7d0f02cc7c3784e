#include "gasnet/network.hpp"

#include "gasnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace gasnet {

namespace {

double sum_weighted_density(std::span<const EndData> ends, double dt, double p) {
    double lhs = 0.0;
    for (const auto& e : ends) {
        lhs += e.area * e.dx / dt * e.eos.density(e.ratio * p);
    }
    return lhs;
}

double nodal_rhs(std::span<const EndData> ends, double withdrawal, double dt) {
    double rhs = -withdrawal;
    for (const auto& e : ends) {
        rhs += e.area * e.dx / dt * e.rho_n + e.sgn * e.area * e.phi_inner;
    }
    return rhs;
}

} // namespace

double nodal_residual(std::span<const EndData> ends, double withdrawal, double dt, double p) {
    return sum_weighted_density(ends, dt, p) - nodal_rhs(ends, withdrawal, dt);
}

double nodal_pressure_solve(std::span<const EndData> ends, double withdrawal, double dt,
                            NodalMethod method) {
    if (ends.empty()) {
        fail(ErrorKind::infeasible_node, "node without incident pipes");
    }
    const double rhs = nodal_rhs(ends, withdrawal, dt);
    if (!(rhs > 0.0)) {
        fail(ErrorKind::infeasible_node,
             "withdrawal drains the node below vacuum (nodal right-hand side " +
                 std::to_string(rhs) + ")");
    }

    if (method == NodalMethod::closed_form) {
        // Every end map is p (b1 + b2 p) = rt rho, so the left-hand side is
        // A p^2 + B p with the coefficients summed over ends.
        double a = 0.0;
        double b = 0.0;
        for (const auto& e : ends) {
            const double w = e.area * e.dx / dt / e.eos.rt;
            a += w * e.ratio * e.ratio * e.eos.b2;
            b += w * e.ratio * e.eos.b1;
        }
        return 2.0 * rhs / (b + std::sqrt(b * b + 4.0 * a * rhs));
    }

    // Bracketed bisection for a general monotone map.
    double hi = 1.0;
    for (const auto& e : ends) {
        hi = std::max(hi, 10.0 * e.eos.pressure(e.rho_n) / e.ratio);
    }
    double lo = 1.0;
    while (nodal_residual(ends, withdrawal, dt, lo) > 0.0 && lo > 1e-300) lo *= 0.5;
    while (nodal_residual(ends, withdrawal, dt, hi) < 0.0) {
        hi *= 2.0;
        if (!std::isfinite(hi)) {
            fail(ErrorKind::infeasible_node, "nodal pressure bracket expansion failed");
        }
    }
    const double tol = 1e-10 * std::abs(rhs);
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double r = nodal_residual(ends, withdrawal, dt, mid);
        if (std::abs(r) <= tol * 1e-4 || mid == lo || mid == hi) {
            return mid;
        }
        (r < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> junction_boundary_fluxes(std::span<const EndData> ends, double p, double dt) {
    std::vector<double> out;
    out.reserve(ends.size());
    for (const auto& e : ends) {
        const double rho_next = e.eos.density(e.ratio * p);
        out.push_back(e.phi_inner - e.sgn * (e.dx / dt) * (rho_next - e.rho_n));
    }
    return out;
}

double flow_balance_residual(std::span<const EndData> ends, std::span<const double> fluxes,
                             double withdrawal) {
    double sum = 0.0;
    for (std::size_t k = 0; k < ends.size(); ++k) {
        sum += ends[k].sgn * ends[k].area * fluxes[k];
    }
    return sum - withdrawal;
}

Network::Network(std::vector<NodeSpec> nodes, std::vector<PipeSpec> pipes,
                 std::vector<CompressorSpec> compressors, EosModel eos, double dx_target)
    : compressors_(std::move(compressors)), eos_(std::move(eos)) {
    std::vector<std::string> problems;
    std::map<std::string, std::size_t> node_ids;
    for (auto& n : nodes) {
        if (!node_ids.emplace(n.id, nodes_.size()).second) {
            problems.push_back("duplicate node id '" + n.id + "'");
            continue;
        }
        if (n.kind == NodeSpec::Kind::slack && !(n.profile.min_value() > 0.0)) {
            problems.push_back("slack node '" + n.id + "' pressure profile must stay positive");
        }
        nodes_.push_back(Node{std::move(n), {}, 0.0, 0.0, 0.0});
    }
    if (std::none_of(nodes_.begin(), nodes_.end(),
                     [](const Node& n) { return n.spec.kind == NodeSpec::Kind::slack; })) {
        problems.push_back("at least one slack node is required");
    }
    if (!(dx_target > 0.0)) {
        problems.push_back("dx target must be positive");
    }

    std::map<std::string, std::size_t> pipe_ids;
    for (auto& p : pipes) {
        if (!pipe_ids.emplace(p.id, edges_.size()).second) {
            problems.push_back("duplicate pipe id '" + p.id + "'");
            continue;
        }
        if (!(p.geometry.length > 0.0)) problems.push_back("pipe '" + p.id + "' length must be positive");
        if (!(p.geometry.diameter > 0.0)) problems.push_back("pipe '" + p.id + "' diameter must be positive");
        if (!(p.geometry.friction >= 0.0)) problems.push_back("pipe '" + p.id + "' friction must be non-negative");
        const auto from = node_ids.find(p.from);
        const auto to = node_ids.find(p.to);
        if (from == node_ids.end() || to == node_ids.end()) {
            problems.push_back("pipe '" + p.id + "' references an unknown node");
            continue;
        }
        if (from->second == to->second) {
            problems.push_back("pipe '" + p.id + "' connects a node to itself");
            continue;
        }
        if (p.geometry.length > 0.0 && p.geometry.diameter > 0.0 && p.geometry.friction >= 0.0 &&
            dx_target > 0.0) {
            Pipe pipe = Pipe::make(p.geometry, PipeGrid::from_target(p.geometry.length, dx_target), eos_);
            edges_.push_back(Edge{std::move(p), from->second, to->second, std::move(pipe), {}, {}});
        }
    }

    for (std::size_t c = 0; c < compressors_.size(); ++c) {
        const auto& comp = compressors_[c];
        const auto it = pipe_ids.find(comp.pipe);
        if (it == pipe_ids.end() || it->second >= edges_.size()) {
            problems.push_back("compressor '" + comp.id + "' references an unknown pipe");
            continue;
        }
        auto& edge = edges_[it->second];
        if (edge.inlet_compressor || edge.outlet_compressor) {
            problems.push_back("pipe '" + comp.pipe + "' has more than one compressor");
            continue;
        }
        if (!(comp.ratio.min_value() >= 1.0)) {
            problems.push_back("compressor '" + comp.id + "' ratio must stay >= 1");
        }
        (comp.side == PipeEnd::inlet ? edge.inlet_compressor : edge.outlet_compressor) = c;
    }

    if (problems.empty()) {
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            auto& edge = edges_[e];
            nodes_[edge.from].incidences.push_back({e, PipeEnd::inlet, -1.0, edge.inlet_compressor});
            nodes_[edge.to].incidences.push_back({e, PipeEnd::outlet, 1.0, edge.outlet_compressor});
        }
        // Connectivity from node 0.
        std::vector<bool> seen(nodes_.size(), false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            const auto n = stack.back();
            stack.pop_back();
            for (const auto& inc : nodes_[n].incidences) {
                const auto& edge = edges_[inc.pipe];
                const auto other = edge.from == n ? edge.to : edge.from;
                if (!seen[other]) {
                    seen[other] = true;
                    stack.push_back(other);
                }
            }
        }
        for (std::size_t n = 0; n < nodes_.size(); ++n) {
            if (!seen[n]) problems.push_back("node '" + nodes_[n].spec.id + "' is not connected");
        }
    }

    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "invalid network:";
        for (const auto& p : problems) msg << "\n  - " << p;
        fail(ErrorKind::validation, msg.str());
    }
}

std::size_t Network::node_index(const std::string& id) const {
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
        if (nodes_[n].spec.id == id) return n;
    }
    fail(ErrorKind::validation, "unknown node '" + id + "'");
}

std::size_t Network::edge_index(const std::string& id) const {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (edges_[e].spec.id == id) return e;
    }
    fail(ErrorKind::validation, "unknown pipe '" + id + "'");
}

double Network::ratio(std::size_t edge, PipeEnd end, double t) const {
    const auto& e = edges_[edge];
    const auto& comp = end == PipeEnd::inlet ? e.inlet_compressor : e.outlet_compressor;
    if (!comp) return 1.0;
    const double alpha = compressors_[*comp].ratio(t);
    if (!(alpha >= 1.0)) {
        fail(ErrorKind::domain, "compressor '" + compressors_[*comp].id + "' ratio below 1");
    }
    return alpha;
}

std::vector<EndData> Network::end_data(std::size_t node, double t) const {
    std::vector<EndData> ends;
    ends.reserve(nodes_[node].incidences.size());
    for (const auto& inc : nodes_[node].incidences) {
        const auto& pipe = edges_[inc.pipe].pipe;
        const int n = pipe.grid.cells;
        const bool inlet = inc.end == PipeEnd::inlet;
        const int cell = inlet ? 0 : n - 1;
        ends.push_back({inc.sgn, pipe.geometry.area(), pipe.grid.dx, pipe.state.rho[cell],
                        pipe.state.phi[inlet ? 1 : n - 1], ratio(inc.pipe, inc.end, t),
                        pipe.cell_eos[cell]});
    }
    return ends;
}

double Network::total_mass() const {
    double m = 0.0;
    for (const auto& e : edges_) m += gasnet::total_mass(e.pipe);
    return m;
}

double Network::cfl_max_dt(double safety) const {
    double dt = std::numeric_limits<double>::infinity();
    for (const auto& e : edges_) dt = std::min(dt, gasnet::cfl_max_dt(e.pipe, safety));
    return dt;
}

void Network::set_node_pressure(std::size_t node, double pressure) {
    nodes_[node].pressure = pressure;
}

void Network::refresh_node_pressures() {
    for (auto& node : nodes_) {
        if (node.incidences.empty()) continue;
        const auto& inc = node.incidences.front();
        const auto& pipe = edges_[inc.pipe].pipe;
        const Side side = inc.end == PipeEnd::inlet ? Side::left : Side::right;
        node.pressure = node.spec.kind == NodeSpec::Kind::slack
                            ? node.spec.profile(time_)
                            : pipe.boundary_pressure(side) / ratio(inc.pipe, inc.end, time_);
        double inj = 0.0;
        for (const auto& i : node.incidences) {
            const auto& p = edges_[i.pipe].pipe;
            inj -= i.sgn * p.geometry.area() *
                   p.boundary_flux(i.end == PipeEnd::inlet ? Side::left : Side::right);
        }
        node.injection = inj;
        node.withdrawal = node.spec.kind == NodeSpec::Kind::slack ? -inj : node.spec.profile(time_);
    }
}

void Network::solve_node(std::size_t n, double dt) {
    auto& node = nodes_[n];
    const double t_half = time_ + 0.5 * dt;
    const double t_next = time_ + dt;
    const auto ends = end_data(n, t_next);

    std::vector<double> fluxes;
    double p = 0.0;
    if (node.spec.kind == NodeSpec::Kind::slack) {
        p = node.spec.profile(t_next);
        fluxes = junction_boundary_fluxes(ends, p, dt);
    } else {
        const double q = node.spec.profile(t_half);
        if (ends.size() == 1) {
            // A single pipe end takes the withdrawal directly as its flux.
            const auto& e = ends.front();
            const double phi = e.sgn * q / e.area;
            const double rho_next = e.rho_n + e.sgn * (e.phi_inner - phi) * dt / e.dx;
            if (!(rho_next > 0.0)) {
                fail(ErrorKind::infeasible_node,
                     "withdrawal at node '" + node.spec.id + "' empties the boundary cell");
            }
            fluxes = {phi};
            p = e.eos.pressure(rho_next) / e.ratio;
        } else {
            try {
                p = nodal_pressure_solve(ends, q, dt);
            } catch (const Error& err) {
                fail(err.kind(), "node '" + node.spec.id + "': " + err.what());
            }
            fluxes = junction_boundary_fluxes(ends, p, dt);
        }
    }

    double injection = 0.0;
    for (std::size_t k = 0; k < ends.size(); ++k) {
        const auto& inc = node.incidences[k];
        auto& pipe = edges_[inc.pipe].pipe;
        auto& face = inc.end == PipeEnd::inlet ? pipe.state.phi.front() : pipe.state.phi.back();
        if (!std::isfinite(fluxes[k])) {
            fail(ErrorKind::instability, "non-finite boundary flux at node '" + node.spec.id + "'");
        }
        face = fluxes[k];
        injection -= ends[k].sgn * ends[k].area * fluxes[k];
    }
    node.pressure = p;
    node.injection = injection;
    node.withdrawal = node.spec.kind == NodeSpec::Kind::slack ? -injection
                                                              : node.spec.profile(t_half);
}

void Network::step(double dt, bool parallel) {
    const auto n_edges = static_cast<std::ptrdiff_t>(edges_.size());
    const auto n_nodes = static_cast<std::ptrdiff_t>(nodes_.size());

    // Errors inside parallel regions are captured and rethrown in order.
    std::vector<std::exception_ptr> errors(std::max(n_edges, n_nodes));
    auto rethrow = [&errors] {
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    };

#pragma omp parallel for if (parallel) schedule(static)
    for (std::ptrdiff_t e = 0; e < n_edges; ++e) {
        try {
            auto& pipe = edges_[e].pipe;
            if (!pipe.state.flux_ready) interior_flux_update(pipe, dt);
        } catch (...) {
            errors[e] = std::current_exception();
        }
    }
    rethrow();

#pragma omp parallel for if (parallel) schedule(static)
    for (std::ptrdiff_t n = 0; n < n_nodes; ++n) {
        try {
            solve_node(static_cast<std::size_t>(n), dt);
        } catch (...) {
            errors[n] = std::current_exception();
        }
    }
    rethrow();

#pragma omp parallel for if (parallel) schedule(static)
    for (std::ptrdiff_t e = 0; e < n_edges; ++e) {
        try {
            density_update(edges_[e].pipe, dt);
        } catch (const Error& err) {
            errors[e] = std::make_exception_ptr(
                Error(err.kind(), "pipe '" + edges_[e].spec.id + "': " + err.what()));
        } catch (...) {
            errors[e] = std::current_exception();
        }
    }
    rethrow();

    steps_ += 1;
    time_ += dt;
}

double Network::max_relative_balance_residual() const {
    double worst = 0.0;
    for (const auto& node : nodes_) {
        double sum = 0.0;
        double scale = 0.0;
        for (const auto& inc : node.incidences) {
            const auto& pipe = edges_[inc.pipe].pipe;
            const double flow =
                pipe.geometry.area() *
                pipe.boundary_flux(inc.end == PipeEnd::inlet ? Side::left : Side::right);
            sum += inc.sgn * flow;
            scale = std::max(scale, std::abs(flow));
        }
        if (scale > 0.0) {
            worst = std::max(worst, std::abs(sum - node.withdrawal) / scale);
        }
    }
    return worst;
}

} // namespace gasnet
