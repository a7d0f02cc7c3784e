#pragma once

#include "gasnet/network.hpp"

#include <vector>

namespace gasnet {

// Where node pressures act along a pipe. The time step imposes them on the
// boundary cell centers, so runs start from the boundary_cells profile; the
// pipe_length form is the continuum problem.
enum class SteadySpan { boundary_cells, pipe_length };

struct SteadyOptions {
    double time = 0.0;                 // schedules are frozen at this time
    double integration_rtol = 1e-10;   // per-pipe pressure profile
    double balance_tolerance = 1e-8;   // kg/s, max nodal residual
    int max_iterations = 100;
    SteadySpan span = SteadySpan::boundary_cells;
};

struct SteadyResult {
    std::vector<double> node_pressure;  // Pa, node order
    std::vector<double> pipe_flow;      // kg/s, from-node to to-node, edge order
    std::vector<double> pipe_inlet_pressure;
    std::vector<double> pipe_outlet_pressure;
    int iterations = 0;
    double max_residual = 0.0;  // kg/s
};

// Pressure at distance `length` along a pipe entering at p_in with constant
// mass flow, from dp/dx = -beta phi|phi| / rho(p, x) integrated adaptively.
// Throws ErrorKind::infeasible_steady if the pressure reaches zero.
double steady_outlet_pressure(const PipeGeometry& geometry, const EosModel& eos, double p_in,
                              double flow, double rtol = 1e-10);

// Pressures sampled at the given increasing positions along the pipe.
std::vector<double> steady_pressure_profile(const PipeGeometry& geometry, const EosModel& eos,
                                            double p_in, double flow,
                                            const std::vector<double>& positions,
                                            double rtol = 1e-10);

// Mass flow carrying p_in to p_out across the pipe.
double steady_pipe_flow(const PipeGeometry& geometry, const EosModel& eos, double p_in,
                        double p_out, double rtol = 1e-10);

// Solves the network with schedules frozen at options.time and writes the
// steady densities (cell centers) and fluxes (all faces) into every pipe.
// Exactly one slack node is required.
SteadyResult steady_state_solve(Network& network, const SteadyOptions& options = {});

} // namespace gasnet
