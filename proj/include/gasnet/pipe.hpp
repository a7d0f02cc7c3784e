#pragma once

#include "gasnet/eos.hpp"
#include "gasnet/profiles.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace gasnet {

struct PipeGeometry {
    double length;    // m
    double diameter;  // m
    double friction;  // Darcy factor, dimensionless

    double area() const;  // pi D^2 / 4
    double beta() const;  // lambda / (2 D)

    // Throws ErrorKind::validation unless length, diameter > 0 and friction >= 0.
    void validate() const;
    bool operator==(const PipeGeometry&) const = default;
};

// Uniform grid: density at cell centers x_i = (i + 1/2) dx, i = 0..N-1, and
// flux at faces x_j = j dx, j = 0..N (both walls included).
struct PipeGrid {
    int cells = 0;
    double dx = 0.0;

    static PipeGrid uniform(double length, int cells);
    // N = max(2, round(L / dx_target)), so that N dx == L.
    static PipeGrid from_target(double length, double dx_target);

    double center(int i) const { return (i + 0.5) * dx; }
    double face(int j) const { return j * dx; }
};

// Densities live on integer time layers, fluxes on half layers. While
// `flux_ready` is set the interior faces already hold the flux for the
// upcoming half layer (after initialization), so the next step skips the
// interior update.
struct PipeState {
    std::vector<double> rho;  // kg/m^3, N cells
    std::vector<double> phi;  // kg/(m^2 s), N + 1 faces
    std::int64_t step = 0;
    double time = 0.0;  // time of the density layer
    bool flux_ready = true;
};

enum class Side { left, right };

// A single pipe with its equation of state frozen per cell.
struct Pipe {
    PipeGeometry geometry;
    PipeGrid grid;
    std::vector<PressureMap> cell_eos;  // evaluated at cell centers
    PipeState state;

    static Pipe make(const PipeGeometry& geometry, const PipeGrid& grid, const EosModel& eos);

    int cells() const { return grid.cells; }
    double pressure(int i) const { return cell_eos[i].pressure(state.rho[i]); }
    // Pressure and density of the boundary cell on a side.
    double boundary_pressure(Side side) const;
    double boundary_density(Side side) const;
    // Flux on the boundary face and its mass flow S phi.
    double boundary_flux(Side side) const;
    // Diagnostic velocity phi / rho at a face; interior faces use the mean of
    // the adjacent densities, boundary faces the boundary cell density.
    double face_velocity(int face) const;
};

// Solution x of x (1 + a |x|) = y for a >= 0, in the cancellation-free form
// sign(y) 2|y| / (1 + sqrt(1 + 4 a |y|)).
double friction_invert(double y, double a);

// Momentum substep on the interior faces 1..N-1 using the densities of the
// current layer. Throws ErrorKind::instability on a non-finite flux.
void interior_flux_update(Pipe& pipe, double dt);

// Boundary face flux that makes the next density update land the boundary
// cell exactly on rho_target.
double boundary_flux_from_density(const Pipe& pipe, Side side, double rho_target, double dt);

// Continuity substep: rho_i -= dt/dx (phi_{i+1} - phi_i). Advances step and
// time. Throws ErrorKind::positivity_loss on a non-positive density.
void density_update(Pipe& pipe, double dt);

// safety dx / max_i sqrt(P'(rho_i)). Throws ErrorKind::domain unless
// 0 < safety <= 1.
double cfl_max_dt(const Pipe& pipe, double safety = 1.0);

// Upper bound of sqrt(P') over all densities >= 0 (attained as rho -> 0),
// max over cells. Gives a time step that stays stable whatever the run does.
double wave_speed_bound(const Pipe& pipe);

// S sum_i rho_i dx.
double total_mass(const Pipe& pipe);

struct PipeBoundary {
    enum class Kind { flux, density, pressure };
    Kind kind = Kind::flux;
    TimeProfile value;

    static PipeBoundary flux(TimeProfile p) { return {Kind::flux, std::move(p)}; }
    static PipeBoundary density(TimeProfile p) { return {Kind::density, std::move(p)}; }
    static PipeBoundary pressure(TimeProfile p) { return {Kind::pressure, std::move(p)}; }
};

// One full time step: interior fluxes, boundary fluxes, densities. Flux
// boundary values are sampled at the half layer, density and pressure
// targets at the next density layer.
void step(Pipe& pipe, const PipeBoundary& left, const PipeBoundary& right, double dt);

} // namespace gasnet
