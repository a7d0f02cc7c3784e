#pragma once

#include "gasnet/eos.hpp"
#include "gasnet/pipe.hpp"
#include "gasnet/profiles.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gasnet {

enum class PipeEnd { inlet, outlet };

struct NodeSpec {
    enum class Kind { slack, demand };
    std::string id;
    Kind kind = Kind::demand;
    TimeProfile profile;  // pressure (Pa) for slack, withdrawal (kg/s) for demand
    bool operator==(const NodeSpec&) const = default;
};

struct PipeSpec {
    std::string id;
    std::string from;
    std::string to;
    PipeGeometry geometry;
    bool operator==(const PipeSpec&) const = default;
};

struct CompressorSpec {
    std::string id;
    std::string pipe;
    PipeEnd side = PipeEnd::inlet;
    TimeProfile ratio;
    bool operator==(const CompressorSpec&) const = default;
};

// One pipe end attached to a node. sgn is +1 when the pipe's outlet meets the
// node (positive flux flows into the node) and -1 at the pipe's inlet.
struct Incidence {
    std::size_t pipe;
    PipeEnd end;
    double sgn;
    std::optional<std::size_t> compressor;
};

// Data of one pipe end entering the nodal equation.
struct EndData {
    double sgn;
    double area;       // m^2
    double dx;         // m
    double rho_n;      // boundary cell density at the current layer
    double phi_inner;  // flux on the face next to the boundary face (half layer)
    double ratio;      // compressor boost between node and pipe end
    PressureMap eos;   // boundary cell equation of state
};

enum class NodalMethod { closed_form, bisection };

// Unique p with sum_k w_k rho_k(ratio_k p) = sum_k w_k rho_n_k
// + sum_k sgn_k S_k phi_inner_k - q, where w_k = S_k dx_k / dt. Throws
// ErrorKind::infeasible_node when the right-hand side is not positive.
double nodal_pressure_solve(std::span<const EndData> ends, double withdrawal, double dt,
                            NodalMethod method = NodalMethod::closed_form);

// Left-hand side minus right-hand side of the nodal equation; strictly
// increasing in p.
double nodal_residual(std::span<const EndData> ends, double withdrawal, double dt, double p);

// Boundary face flux per end for node pressure p:
// phi = phi_inner - sgn (dx/dt) (rho(ratio p) - rho_n).
std::vector<double> junction_boundary_fluxes(std::span<const EndData> ends, double p, double dt);

// sum_k sgn_k S_k phi_k - q.
double flow_balance_residual(std::span<const EndData> ends, std::span<const double> fluxes,
                             double withdrawal);

struct NetworkDefinition {
    std::vector<NodeSpec> nodes;
    std::vector<PipeSpec> pipes;
    std::vector<CompressorSpec> compressors;
    bool operator==(const NetworkDefinition&) const = default;
};

class Network {
public:
    struct Node {
        NodeSpec spec;
        std::vector<Incidence> incidences;  // fixed order, used for all sums
        double pressure = 0.0;              // at the latest density layer
        double injection = 0.0;             // kg/s from the node into pipes, latest half layer
        double withdrawal = 0.0;            // q applied at the latest half layer (implied for slack)
    };
    struct Edge {
        PipeSpec spec;
        std::size_t from = 0;
        std::size_t to = 0;
        Pipe pipe;
        std::optional<std::size_t> inlet_compressor;
        std::optional<std::size_t> outlet_compressor;
    };

    // Builds grids with dx = L / round(L / dx_target) per pipe. Throws
    // ErrorKind::validation listing every violated rule.
    Network(std::vector<NodeSpec> nodes, std::vector<PipeSpec> pipes,
            std::vector<CompressorSpec> compressors, EosModel eos, double dx_target);
    Network(NetworkDefinition def, EosModel eos, double dx_target)
        : Network(std::move(def.nodes), std::move(def.pipes), std::move(def.compressors),
                  std::move(eos), dx_target) {}

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::vector<Edge>& edges() noexcept { return edges_; }
    const std::vector<CompressorSpec>& compressors() const noexcept { return compressors_; }
    const EosModel& eos() const noexcept { return eos_; }

    std::size_t node_index(const std::string& id) const;
    std::size_t edge_index(const std::string& id) const;

    double time() const noexcept { return time_; }
    std::int64_t steps() const noexcept { return steps_; }
    void set_time(double t) noexcept { time_ = t; }

    // Boost ratio at a pipe end at time t (1 without a compressor). Throws
    // ErrorKind::domain when a schedule drops below 1.
    double ratio(std::size_t edge, PipeEnd end, double t) const;

    // Nodal-equation data for every incidence of a node, in incidence order.
    std::vector<EndData> end_data(std::size_t node, double t) const;

    double total_mass() const;
    // safety * min over pipes of cfl_max_dt.
    double cfl_max_dt(double safety = 1.0) const;

    // Sets node pressures (slack: prescribed, demand: from the first adjoining
    // boundary cell) and injections from the current boundary fluxes.
    void refresh_node_pressures();
    void set_node_pressure(std::size_t node, double pressure);

    // Three-phase step: interior fluxes on all pipes, nodal solves and
    // junction fluxes on all nodes, densities on all pipes. When `parallel`
    // is set phases run across pipes/nodes with OpenMP; results are
    // identical to the serial order.
    void step(double dt, bool parallel = false);

    // Largest |flow_balance_residual| / max incident S|phi| over nodes,
    // evaluated on the current boundary fluxes. Slack nodes use their
    // implied injection.
    double max_relative_balance_residual() const;

private:
    void solve_node(std::size_t node, double dt);

    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<CompressorSpec> compressors_;
    EosModel eos_;
    double time_ = 0.0;
    std::int64_t steps_ = 0;
};

} // namespace gasnet
