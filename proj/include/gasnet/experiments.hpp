#pragma once

#include "gasnet/network.hpp"
#include "gasnet/simulation.hpp"
#include "gasnet/steady.hpp"

#include <array>
#include <string>
#include <vector>

namespace gasnet {

// ---- error metrics ------------------------------------------------------

enum class GridLayout { centers, faces };

// Trapezoid quadrature of (a - b)^2 over the pipe, on the grid of the
// shorter field. The longer field must be a 3^k refinement of it (nested
// grid); coincident points are taken. dx is the spacing of the coarser
// field. Throws ErrorKind::domain for incompatible sizes.
double l2_error(const std::vector<double>& a, const std::vector<double>& b, double dx,
                GridLayout layout = GridLayout::faces);

// Coarse samples of a fine field on a nested grid.
std::vector<double> restrict_nested(const std::vector<double>& fine, std::size_t coarse_size,
                                    GridLayout layout);

// ---- self-convergence study --------------------------------------------

struct ConvergenceOptions {
    int levels = 6;                   // coarse dt = 3^0 .. 3^-(levels-1), reference 3^-levels
    double length = 1e4;              // m
    int base_cells = 22;              // cells at dt = 1 s
    double wave_speed = 377.9683;     // m/s, ideal gas
    double mean_density = 56.817;     // kg/m^3
    double horizon = 1.0;             // s, comparison time (one coarsest step)
    bool self_reference = false;      // compare the reference run against itself
};

struct ConvergenceRates {
    double last_two = 0.0;
    double endpoint = 0.0;
};

struct ConvergenceReport {
    std::vector<double> dt;
    std::vector<int> cells;
    // Root of the integrated squared error per level, for rho, p and phi.
    std::array<std::vector<double>, 3> errors;
    std::array<ConvergenceRates, 3> rates;
    static constexpr std::array<const char*, 3> variables{"rho", "p", "phi"};
};

// rho0(x) = rho_bar (1 - (0.2/pi) atan(10 (x - L/2) / L)).
double arctan_profile(double x, double length, double mean_density);

ConvergenceReport run_convergence_study(const ConvergenceOptions& options = {});

// ---- traveling wave --------------------------------------------------------

struct TravelingWaveResult {
    double dx = 0.0;
    double dt = 0.0;
    double t_end = 0.0;
    double error = 0.0;  // root integrated squared density error vs exact translate
};

// Frictionless ideal pipe with the arctan profile moving right at the wave
// speed, exact fluxes at both ends, run to t_end (a multiple of dt). Throws
// ErrorKind::cfl_violation when dt exceeds the bound at cfl_safety.
TravelingWaveResult run_traveling_wave(int cells, double dt, double t_end,
                                       const ConvergenceOptions& setup = {},
                                       double cfl_safety = 1.0);

// ---- single-pipe transients --------------------------------------------

struct EndSample {
    double p = 0.0;
    double rho = 0.0;
    double phi = 0.0;
    double v = 0.0;
};

struct BoundarySeries {
    std::vector<double> t;
    std::vector<EndSample> left;
    std::vector<EndSample> right;
};

struct TransientOptions {
    double dx = 0.0;         // m; 0 selects the scenario default
    double dt = 0.0;         // s; 0 derives from the wave speed bound
    double t_end = 0.0;      // s; 0 selects the scenario default
    double cadence = 60.0;   // s
    double cfl_safety = 0.9;
};

struct TransientReport {
    std::string scenario;
    std::string eos;
    double dx = 0.0;
    double dt = 0.0;
    BoundarySeries series;
    RunSummary run;
};

struct PipeScenario {
    PipeGeometry geometry;
    EosModel eos;
    double initial_pressure;  // Pa, uniform
    double initial_flux;      // kg/(m^2 s), uniform
    PipeBoundary left;
    PipeBoundary right;
    double default_dx;
    double default_t_end;
};

PipeScenario fast_transient_scenario(const std::string& eos);
PipeScenario slow_transient_scenario(const std::string& eos, int periods = 50);
PipeScenario temperature_scenario(double decay_rate);

TransientReport run_pipe_scenario(const PipeScenario& scenario, const std::string& name,
                                  const TransientOptions& options = {});

// eos is "ideal" (c = 338.25) or "cnga".
TransientReport run_fast_transient(const std::string& eos, const TransientOptions& options = {});
TransientReport run_slow_transient(const std::string& eos, const TransientOptions& options = {},
                                   int periods = 50);
TransientReport run_temperature_effect(double decay_rate, const TransientOptions& options = {});

// Root mean square of a - b.
double rms_difference(const std::vector<double>& a, const std::vector<double>& b);

// Temperature-effect runs differ only in the decay rate; compare their
// boundary series from `from` (the start of the forcing) onwards. Relative
// values divide by the mean magnitude of the first run's series.
struct TemperatureComparison {
    double left_flux_rms = 0.0;
    double left_flux_relative = 0.0;
    double right_pressure_relative = 0.0;
    double right_density_relative = 0.0;
    double right_flux_relative = 0.0;
    double right_velocity_relative = 0.0;
    // left flux differs more, relatively, than every right-end variable
    bool left_dominates() const;
};

inline constexpr double kTemperatureForcingStart = 4.0 * 3600.0;

TemperatureComparison compare_temperature_runs(const TransientReport& a, const TransientReport& b,
                                               double from = kTemperatureForcingStart);

// ---- five-node network -----------------------------------------------------

struct FiveNodeData {
    double slack_pressure = 3447378.645;  // Pa
    double d3 = 150.0, d5 = 150.0;        // kg/s
    double c1 = 1.5290113, c2 = 1.1128863, c3 = 1.2242249;
    double period = 86400.0;              // s
};

// Topology of the five-node example. With `schedules` the compressor and
// withdrawal profiles follow the daily schedules, otherwise they are frozen
// at their t = 0 values.
NetworkDefinition five_node_definition(bool schedules = true, const FiveNodeData& data = {});

struct FiveNodeOptions {
    double dx = 62.5;
    double dt = 0.125;  // 0 derives the step from the wave speed bound
    double t_end = 86400.0;
    double cadence = 60.0;
    double cfl_safety = 0.9;
    bool parallel = false;
    bool audit = false;
    EosModel eos = EosModel::cnga();
};

struct NetworkSample {
    double t;
    LedgerSample ledger;
    std::vector<double> node_pressure;
    std::vector<double> node_injection;
};

struct FiveNodeReport {
    SteadyResult initial;
    RunSummary run;
    std::vector<NetworkSample> samples;
};

FiveNodeReport run_five_node_network(const FiveNodeOptions& options = {},
                                     const SampleObserver& observer = {});

} // namespace gasnet
