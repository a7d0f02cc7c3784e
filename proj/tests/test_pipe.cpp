#include "doctest.h"

#include "gasnet/error.hpp"
#include "gasnet/pipe.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace gasnet;

namespace {

// x (1 + a|x|) = y by plain bisection.
double bisect_friction(double y, double a) {
    double lo = -std::abs(y) - 1.0, hi = std::abs(y) + 1.0;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double f = mid * (1.0 + a * std::abs(mid)) - y;
        (f > 0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

Pipe uniform_pipe(double rho, double phi, int cells = 50, double friction = 0.01,
                  const EosModel& eos = EosModel::cnga()) {
    auto pipe = Pipe::make({20000.0, 0.9144, friction}, PipeGrid::uniform(20000.0, cells), eos);
    std::fill(pipe.state.rho.begin(), pipe.state.rho.end(), rho);
    std::fill(pipe.state.phi.begin(), pipe.state.phi.end(), phi);
    return pipe;
}

void bumpy(Pipe& pipe, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& r : pipe.state.rho) r = 50.0 + 2.0 * u(gen);
    for (auto& f : pipe.state.phi) f = 100.0 + 50.0 * u(gen);
}

} // namespace

TEST_CASE("friction_invert basics") {
    for (double y : {-5.0, 0.0, 1e-8, 3.0, 1e4}) CHECK(friction_invert(y, 0.0) == y);
    CHECK(friction_invert(2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> uy(-1e4, 1e4), ua(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const double y = uy(gen), a = ua(gen);
        CHECK(friction_invert(-y, a) == -friction_invert(y, a));
        const double x = friction_invert(y, a);
        CHECK(std::abs(x * (1 + a * std::abs(x)) - y) <= 1e-12 * std::max(1.0, std::abs(y)));
    }
    CHECK_THROWS_AS(friction_invert(1.0, -1e-3), Error);
}

TEST_CASE("interior update matches a scalar root solve on one face") {
    auto pipe = uniform_pipe(56.817, 240.0, 200, 0.01);
    const double dx = pipe.grid.dx;
    const double dt = 0.9 * dx / 370.0;
    pipe.state.rho[100] = 57.0;
    const double p99 = pipe.pressure(99), p100 = pipe.pressure(100);
    const double a = pipe.geometry.beta() * dt / (56.817 + 57.0);
    const double y = 240.0 - dt / dx * (p100 - p99) - a * 240.0 * 240.0;
    interior_flux_update(pipe, dt);
    CHECK(std::abs(pipe.state.phi[100] - bisect_friction(y, a)) <= 1e-12 * 240.0);
}

TEST_CASE("frictionless ideal update is the linear leapfrog") {
    const double c = 338.25;
    auto pipe = uniform_pipe(56.0, 10.0, 40, 0.0, EosModel::ideal(c));
    bumpy(pipe, 3);
    auto before = pipe.state;
    const double dt = 0.5, dx = pipe.grid.dx;
    interior_flux_update(pipe, dt);
    for (int j = 1; j < pipe.cells(); ++j) {
        const double expect =
            before.phi[j] - dt * c * c / dx * (before.rho[j] - before.rho[j - 1]);
        CHECK(std::abs(pipe.state.phi[j] - expect) <= 1e-12 * 500.0);
    }
    CHECK(pipe.state.phi[0] == before.phi[0]);
    CHECK(pipe.state.phi.back() == before.phi.back());
}

TEST_CASE("uniform state at rest stays at rest") {
    auto pipe = uniform_pipe(56.817, 0.0);
    const auto closed = PipeBoundary::flux(TimeProfile::constant(0.0));
    pipe.state.flux_ready = false;
    for (int k = 0; k < 100; ++k) step(pipe, closed, closed, 0.5);
    for (double f : pipe.state.phi) CHECK(f == 0.0);
    for (double r : pipe.state.rho) CHECK(r == 56.817);
}

TEST_CASE("frictionless uniform flow with matching boundaries is steady") {
    auto pipe = uniform_pipe(56.0, 120.0, 30, 0.0);
    const auto in = PipeBoundary::flux(TimeProfile::constant(120.0));
    for (int k = 0; k < 50; ++k) step(pipe, in, in, 0.5);
    for (double r : pipe.state.rho) CHECK(r == 56.0);
    for (double f : pipe.state.phi) CHECK(f == 120.0);
}

TEST_CASE("density boundary lands the boundary cell on target") {
    auto pipe = uniform_pipe(56.0, 0.0);
    bumpy(pipe, 11);
    const double dt = 0.2;
    const auto left = PipeBoundary::density(TimeProfile::constant(55.5));
    const auto right = PipeBoundary::density(TimeProfile::constant(57.25));
    for (int k = 0; k < 5; ++k) {
        step(pipe, left, right, dt);
        CHECK(std::abs(pipe.state.rho.front() - 55.5) <= 1e-12 * 55.5);
        CHECK(std::abs(pipe.state.rho.back() - 57.25) <= 1e-12 * 57.25);
    }
    auto rest = uniform_pipe(56.0, 0.0);
    CHECK(boundary_flux_from_density(rest, Side::right, 56.0, dt) == 0.0);
    CHECK(boundary_flux_from_density(rest, Side::left, 56.0, dt) == 0.0);
}

TEST_CASE("pressure boundary equals the matching density boundary") {
    auto a = uniform_pipe(56.817, 0.0);
    bumpy(a, 5);
    auto b = a;
    const double rho = density_from_pressure(6.5e6, EosModel::cnga());
    CHECK(std::abs(rho - 56.817) < 0.01);
    const auto flux = PipeBoundary::flux(TimeProfile::constant(200.0));
    for (int k = 0; k < 20; ++k) {
        step(a, PipeBoundary::pressure(TimeProfile::constant(6.5e6)), flux, 0.3);
        step(b, PipeBoundary::density(TimeProfile::constant(rho)), flux, 0.3);
    }
    CHECK(a.state.rho == b.state.rho);
    CHECK(a.state.phi == b.state.phi);
}

TEST_CASE("density update and ledger") {
    auto pipe = uniform_pipe(56.0, 77.0);
    density_update(pipe, 1.0);
    for (double r : pipe.state.rho) CHECK(r == 56.0);
    CHECK(pipe.state.step == 1);
    CHECK(pipe.state.time == 1.0);

    auto closed = uniform_pipe(56.0, 0.0);
    bumpy(closed, 21);
    const auto wall = PipeBoundary::flux(TimeProfile::constant(0.0));
    const double m0 = total_mass(closed);
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
        const double before = total_mass(closed);
        step(closed, wall, wall, 0.5);
        worst = std::max(worst, std::abs(total_mass(closed) - before) / before);
    }
    CHECK(worst <= 1e-13);
    CHECK(std::abs(total_mass(closed) - m0) / m0 <= 1e-12);

    auto open = uniform_pipe(56.0, 50.0);
    bumpy(open, 8);
    const auto left = PipeBoundary::pressure(TimeProfile::constant(6.3e6));
    const auto right = PipeBoundary::flux(TimeProfile::constant(300.0));
    for (int k = 0; k < 300; ++k) {
        const double before = total_mass(open);
        step(open, left, right, 0.5);
        const double flow = 0.5 * open.geometry.area() * (open.state.phi.front() - open.state.phi.back());
        CHECK(std::abs(total_mass(open) - before - flow) <= 4e-16 * before * open.cells());
    }
}

TEST_CASE("positivity loss is reported") {
    auto pipe = uniform_pipe(1.0, 0.0, 10);
    pipe.state.phi[1] = 1e6;
    try {
        density_update(pipe, 1.0);
        FAIL("expected positivity loss");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::positivity_loss);
    }
}

TEST_CASE("grid reversal with flux negation commutes with the update") {
    auto fwd = uniform_pipe(56.0, 0.0, 37);
    bumpy(fwd, 99);
    auto rev = fwd;
    std::reverse(rev.state.rho.begin(), rev.state.rho.end());
    std::reverse(rev.state.phi.begin(), rev.state.phi.end());
    for (auto& f : rev.state.phi) f = -f;
    interior_flux_update(fwd, 0.4);
    interior_flux_update(rev, 0.4);
    const int n = fwd.cells();
    for (int j = 0; j <= n; ++j) {
        CHECK(rev.state.phi[n - j] == doctest::Approx(-fwd.state.phi[j]).epsilon(1e-13));
    }
}

TEST_CASE("cfl bound and total mass") {
    auto pipe = Pipe::make({1000.0, 0.9144, 0.01}, PipeGrid::uniform(1000.0, 10),
                           EosModel::ideal(338.25));
    std::fill(pipe.state.rho.begin(), pipe.state.rho.end(), 50.0);
    CHECK(cfl_max_dt(pipe, 1.0) == doctest::Approx(100.0 / 338.25));
    CHECK(cfl_max_dt(pipe, 1.0) == doctest::Approx(0.29565).epsilon(1e-4));
    CHECK(cfl_max_dt(pipe, 0.5) == doctest::Approx(50.0 / 338.25));
    CHECK_THROWS_AS(cfl_max_dt(pipe, 0.0), Error);
    CHECK_THROWS_AS(cfl_max_dt(pipe, 1.5), Error);

    auto big = uniform_pipe(56.817, 0.0, 100);
    const double expect = 56.817 * 20000.0 * std::numbers::pi * 0.9144 * 0.9144 / 4.0;
    CHECK(total_mass(big) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(expect == doctest::Approx(7.4635e5).epsilon(2e-4));
    std::fill(big.state.rho.begin(), big.state.rho.end(), 0.0);
    CHECK(total_mass(big) == 0.0);
}

TEST_CASE("grid construction") {
    const auto g = PipeGrid::from_target(70000.0, 62.5);
    CHECK(g.cells == 1120);
    CHECK(std::abs(g.cells * g.dx - 70000.0) <= 1e-12 * 70000.0);
    CHECK(PipeGrid::from_target(100.0, 500.0).cells == 2);
    CHECK_THROWS_AS(PipeGrid::uniform(10.0, 1), Error);
    CHECK_THROWS_AS(Pipe::make({-1.0, 0.5, 0.01}, PipeGrid::uniform(1.0, 2), EosModel::cnga()), Error);
    CHECK(g.center(0) == doctest::Approx(31.25));
    CHECK(g.face(1120) == doctest::Approx(70000.0));
}

TEST_CASE("face velocity sampling") {
    auto pipe = uniform_pipe(50.0, 100.0, 4);
    pipe.state.rho = {40.0, 60.0, 50.0, 25.0};
    CHECK(pipe.face_velocity(0) == doctest::Approx(100.0 / 40.0));
    CHECK(pipe.face_velocity(1) == doctest::Approx(2.0));
    CHECK(pipe.face_velocity(4) == doctest::Approx(4.0));
}
