#include "gasnet/eos.hpp"

#include "gasnet/error.hpp"

#include <cmath>

namespace gasnet {

double GasConstants::c1() const {
    return a1 * std::pow(10.0, a2 * gravity) / std::pow(1.8, a3);
}

CngaCoefficients cnga_coefficients(double temperature, const GasConstants& constants) {
    if (!(temperature > 0.0)) {
        fail(ErrorKind::domain, "cnga_coefficients: temperature must be positive");
    }
    const double c1 = constants.c1();
    const double t_pow = std::pow(temperature, constants.a3);
    return {1.0 + c1 * constants.atmospheric_psi / t_pow, c1 / (constants.pa_per_psi * t_pow)};
}

double gas_constant_from_gravity(double gravity, const GasConstants& constants) {
    if (!(gravity > 0.0)) {
        fail(ErrorKind::domain, "gas_constant_from_gravity: gravity must be positive");
    }
    return constants.universal_gas_constant / (constants.air_molar_mass * gravity);
}

double temperature_at(double x, const TemperatureProfile& profile) {
    return profile.ambient + profile.jump * std::exp(-profile.decay_rate * x);
}

double PressureMap::pressure(double rho) const {
    // Positive root of b2 p^2 + b1 p - rt rho = 0, rationalized so that
    // b2 -> 0 is exact.
    const double q = rt * rho;
    return 2.0 * q / (b1 + std::sqrt(b1 * b1 + 4.0 * b2 * q));
}

double PressureMap::density(double p) const { return p * (b1 + b2 * p) / rt; }

double PressureMap::dp_drho(double rho) const { return rt / (b1 + 2.0 * b2 * pressure(rho)); }

double PressureMap::compressibility(double p) const { return 1.0 / (b1 + b2 * p); }

EosModel EosModel::ideal(double wave_speed) {
    if (!(wave_speed > 0.0)) {
        fail(ErrorKind::domain, "ideal gas: wave speed must be positive");
    }
    return EosModel(Ideal{wave_speed});
}

EosModel EosModel::cnga(double b1, double b2, double rt) {
    if (!(b1 >= 1.0) || !(b2 > 0.0) || !(rt > 0.0)) {
        fail(ErrorKind::domain, "cnga: require b1 >= 1, b2 > 0, RT > 0");
    }
    return EosModel(CngaIsothermal{b1, b2, rt});
}

EosModel EosModel::cnga_detailed(double temperature, double gravity, const GasConstants& constants) {
    if (!(temperature > 0.0) || !(gravity > 0.0)) {
        fail(ErrorKind::domain, "cnga_detailed: temperature and gravity must be positive");
    }
    GasConstants c = constants;
    c.gravity = gravity;
    return EosModel(CngaDetailed{temperature, gravity, c});
}

EosModel EosModel::cnga_nonisothermal(const TemperatureProfile& profile, double gravity,
                                      const GasConstants& constants) {
    if (!(profile.ambient > 0.0) || !(profile.jump >= 0.0) || !(profile.decay_rate >= 0.0)) {
        fail(ErrorKind::domain, "cnga_nonisothermal: require T_ambient > 0, T_jump >= 0, r >= 0");
    }
    if (!(gravity > 0.0)) {
        fail(ErrorKind::domain, "cnga_nonisothermal: gravity must be positive");
    }
    GasConstants c = constants;
    c.gravity = gravity;
    return EosModel(NonIsothermal{profile, gravity, c});
}

bool EosModel::is_isothermal() const noexcept {
    return !std::holds_alternative<NonIsothermal>(model_);
}

std::string EosModel::name() const {
    struct Visitor {
        std::string operator()(const Ideal&) const { return "ideal"; }
        std::string operator()(const CngaIsothermal&) const { return "cnga"; }
        std::string operator()(const CngaDetailed&) const { return "cnga_detailed"; }
        std::string operator()(const NonIsothermal&) const { return "cnga_nonisothermal"; }
    };
    return std::visit(Visitor{}, model_);
}

namespace {

PressureMap detailed_map(double temperature, const GasConstants& constants) {
    const auto [b1, b2] = cnga_coefficients(temperature, constants);
    return {b1, b2, gas_constant_from_gravity(constants.gravity, constants) * temperature};
}

} // namespace

PressureMap EosModel::at(double x) const {
    struct Visitor {
        double x;
        PressureMap operator()(const Ideal& m) const { return {1.0, 0.0, m.wave_speed * m.wave_speed}; }
        PressureMap operator()(const CngaIsothermal& m) const { return {m.b1, m.b2, m.rt}; }
        PressureMap operator()(const CngaDetailed& m) const {
            return detailed_map(m.temperature, m.constants);
        }
        PressureMap operator()(const NonIsothermal& m) const {
            return detailed_map(temperature_at(x, m.profile), m.constants);
        }
    };
    return std::visit(Visitor{x}, model_);
}

double compressibility(double p, const EosModel& model, double x) {
    if (!(p >= 0.0)) {
        fail(ErrorKind::domain, "compressibility: negative pressure");
    }
    return model.at(x).compressibility(p);
}

double density_from_pressure(double p, const EosModel& model, double x) {
    if (!(p >= 0.0)) {
        fail(ErrorKind::domain, "density_from_pressure: negative pressure");
    }
    return model.at(x).density(p);
}

double pressure_from_density(double rho, const EosModel& model, double x) {
    if (!(rho >= 0.0)) {
        fail(ErrorKind::domain, "pressure_from_density: negative density");
    }
    return model.at(x).pressure(rho);
}

double wave_speed_sq(double rho, const EosModel& model, double x) {
    if (!(rho > 0.0)) {
        fail(ErrorKind::domain, "wave_speed_sq: density must be positive");
    }
    return model.at(x).dp_drho(rho);
}

} // namespace gasnet
