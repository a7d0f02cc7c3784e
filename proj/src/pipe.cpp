#include "gasnet/pipe.hpp"

#include "gasnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gasnet {

double PipeGeometry::area() const { return std::numbers::pi * diameter * diameter / 4.0; }

double PipeGeometry::beta() const { return friction / (2.0 * diameter); }

void PipeGeometry::validate() const {
    if (!(length > 0.0)) fail(ErrorKind::validation, "pipe length must be positive");
    if (!(diameter > 0.0)) fail(ErrorKind::validation, "pipe diameter must be positive");
    if (!(friction >= 0.0)) fail(ErrorKind::validation, "pipe friction must be non-negative");
}

PipeGrid PipeGrid::uniform(double length, int cells) {
    if (cells < 2) {
        fail(ErrorKind::validation, "a pipe needs at least 2 cells");
    }
    if (!(length > 0.0)) {
        fail(ErrorKind::validation, "pipe length must be positive");
    }
    return {cells, length / cells};
}

PipeGrid PipeGrid::from_target(double length, double dx_target) {
    if (!(dx_target > 0.0)) {
        fail(ErrorKind::validation, "dx target must be positive");
    }
    const auto n = static_cast<int>(std::max(2.0, std::round(length / dx_target)));
    return uniform(length, n);
}

Pipe Pipe::make(const PipeGeometry& geometry, const PipeGrid& grid, const EosModel& eos) {
    geometry.validate();
    if (grid.cells < 2) {
        fail(ErrorKind::validation, "a pipe needs at least 2 cells");
    }
    Pipe pipe{geometry, grid, {}, {}};
    pipe.cell_eos.reserve(grid.cells);
    for (int i = 0; i < grid.cells; ++i) {
        pipe.cell_eos.push_back(eos.at(grid.center(i)));
    }
    pipe.state.rho.assign(grid.cells, 0.0);
    pipe.state.phi.assign(grid.cells + 1, 0.0);
    return pipe;
}

double Pipe::boundary_pressure(Side side) const {
    return pressure(side == Side::left ? 0 : grid.cells - 1);
}

double Pipe::boundary_density(Side side) const {
    return state.rho[side == Side::left ? 0 : grid.cells - 1];
}

double Pipe::boundary_flux(Side side) const {
    return state.phi[side == Side::left ? 0 : grid.cells];
}

double Pipe::face_velocity(int face) const {
    const auto& rho = state.rho;
    if (face <= 0) return state.phi[0] / rho.front();
    if (face >= grid.cells) return state.phi[grid.cells] / rho.back();
    return state.phi[face] / (0.5 * (rho[face - 1] + rho[face]));
}

double friction_invert(double y, double a) {
    if (!(a >= 0.0)) {
        fail(ErrorKind::domain, "friction_invert: a must be non-negative");
    }
    const double m = std::abs(y);
    const double x = 2.0 * m / (1.0 + std::sqrt(1.0 + 4.0 * a * m));
    return std::copysign(x, y);
}

void interior_flux_update(Pipe& pipe, double dt) {
    auto& rho = pipe.state.rho;
    auto& phi = pipe.state.phi;
    const int n = pipe.grid.cells;
    const double ratio = dt / pipe.grid.dx;
    const double beta_dt = pipe.geometry.beta() * dt;

    double p_left = pipe.cell_eos[0].pressure(rho[0]);
    for (int j = 1; j < n; ++j) {
        const double p_right = pipe.cell_eos[j].pressure(rho[j]);
        const double a = beta_dt / (rho[j - 1] + rho[j]);
        const double f = phi[j];
        const double y = f - ratio * (p_right - p_left) - a * f * std::abs(f);
        const double updated = friction_invert(y, a);
        if (!std::isfinite(updated)) {
            fail(ErrorKind::instability, "non-finite flux at face " + std::to_string(j) +
                                             " in step " + std::to_string(pipe.state.step));
        }
        phi[j] = updated;
        p_left = p_right;
    }
}

double boundary_flux_from_density(const Pipe& pipe, Side side, double rho_target, double dt) {
    const auto& s = pipe.state;
    const double k = pipe.grid.dx / dt;
    if (side == Side::right) {
        const int n = pipe.grid.cells;
        return s.phi[n - 1] - k * (rho_target - s.rho[n - 1]);
    }
    return s.phi[1] + k * (rho_target - s.rho[0]);
}

void density_update(Pipe& pipe, double dt) {
    auto& rho = pipe.state.rho;
    const auto& phi = pipe.state.phi;
    const double ratio = dt / pipe.grid.dx;
    for (int i = 0; i < pipe.grid.cells; ++i) {
        rho[i] -= ratio * (phi[i + 1] - phi[i]);
        if (!(rho[i] > 0.0)) {
            fail(std::isfinite(rho[i]) ? ErrorKind::positivity_loss : ErrorKind::instability,
                 "density " + std::to_string(rho[i]) + " in cell " + std::to_string(i) +
                     " at step " + std::to_string(pipe.state.step + 1));
        }
    }
    pipe.state.step += 1;
    pipe.state.time += dt;
    pipe.state.flux_ready = false;
}

double cfl_max_dt(const Pipe& pipe, double safety) {
    if (!(safety > 0.0 && safety <= 1.0)) {
        fail(ErrorKind::domain, "cfl_max_dt: safety must lie in (0, 1]");
    }
    double c2 = 0.0;
    for (int i = 0; i < pipe.grid.cells; ++i) {
        c2 = std::max(c2, pipe.cell_eos[i].dp_drho(pipe.state.rho[i]));
    }
    return safety * pipe.grid.dx / std::sqrt(c2);
}

double wave_speed_bound(const Pipe& pipe) {
    double c2 = 0.0;
    for (const auto& m : pipe.cell_eos) c2 = std::max(c2, m.rt / m.b1);
    return std::sqrt(c2);
}

double total_mass(const Pipe& pipe) {
    double sum = 0.0;
    for (double r : pipe.state.rho) sum += r;
    return pipe.geometry.area() * sum * pipe.grid.dx;
}

namespace {

double boundary_face_flux(const Pipe& pipe, Side side, const PipeBoundary& bc, double dt) {
    const double t = pipe.state.time;
    switch (bc.kind) {
    case PipeBoundary::Kind::flux:
        return bc.value(t + 0.5 * dt);
    case PipeBoundary::Kind::density:
        return boundary_flux_from_density(pipe, side, bc.value(t + dt), dt);
    case PipeBoundary::Kind::pressure: {
        const int cell = side == Side::left ? 0 : pipe.grid.cells - 1;
        const double p = bc.value(t + dt);
        if (!(p >= 0.0)) {
            fail(ErrorKind::domain, "negative boundary pressure");
        }
        return boundary_flux_from_density(pipe, side, pipe.cell_eos[cell].density(p), dt);
    }
    }
    return 0.0;
}

} // namespace

void step(Pipe& pipe, const PipeBoundary& left, const PipeBoundary& right, double dt) {
    if (!pipe.state.flux_ready) {
        interior_flux_update(pipe, dt);
    }
    const double phi_left = boundary_face_flux(pipe, Side::left, left, dt);
    const double phi_right = boundary_face_flux(pipe, Side::right, right, dt);
    pipe.state.phi.front() = phi_left;
    pipe.state.phi.back() = phi_right;
    density_update(pipe, dt);
}

} // namespace gasnet
