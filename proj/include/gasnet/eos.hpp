#pragma once

#include <string>
#include <variant>

namespace gasnet {

// Constants of the CNGA compressibility fit. The fit is stated in psig and
// degrees Rankine; everything outside cnga_coefficients() is SI.
struct GasConstants {
    double a1 = 344400.0;
    double a2 = 1.785;
    double a3 = 3.825;
    double gravity = 0.650784;                 // air = 1
    double universal_gas_constant = 8314.46;   // J/(kmol K)
    double air_molar_mass = 28.9626;           // kg/kmol
    double atmospheric_psi = 14.7;             // c2
    double pa_per_psi = 6894.75729;            // c3

    // a1 * 10^(a2 G) / 1.8^a3, the Kelvin form of the fit prefactor.
    double c1() const;
    bool operator==(const GasConstants&) const = default;
};

struct CngaCoefficients {
    double b1;  // dimensionless
    double b2;  // 1/Pa
};

// b1 = 1 + c1 c2 / T^a3, b2 = c1 / (c3 T^a3). Throws domain for T <= 0.
CngaCoefficients cnga_coefficients(double temperature, const GasConstants& constants = {});

// Specific gas constant R_u / (M_air G) in J/(kg K).
double gas_constant_from_gravity(double gravity, const GasConstants& constants = {});

struct TemperatureProfile {
    double ambient = 288.706;  // K
    double jump = 40.0;        // K
    double decay_rate = 1e-3;  // 1/m
    bool operator==(const TemperatureProfile&) const = default;
};

// T_ambient + T_jump exp(-r x).
double temperature_at(double x, const TemperatureProfile& profile);

// Local density/pressure relation p (b1 + b2 p) = rt rho. The ideal gas is
// the special case b1 = 1, b2 = 0, rt = c^2.
struct PressureMap {
    double b1 = 1.0;
    double b2 = 0.0;
    double rt = 1.0;

    double pressure(double rho) const;
    double density(double p) const;
    double dp_drho(double rho) const;
    double compressibility(double p) const;
};

// Isothermal constants of the single-pipe scenarios.
inline constexpr double kCngaB1 = 1.00300865;
inline constexpr double kCngaB2 = 2.96848838e-8;
inline constexpr double kCngaRT = 1.368207e5;

class EosModel {
public:
    struct Ideal {
        double wave_speed;
        bool operator==(const Ideal&) const = default;
    };
    struct CngaIsothermal {
        double b1, b2, rt;
        bool operator==(const CngaIsothermal&) const = default;
    };
    struct CngaDetailed {
        double temperature, gravity;
        GasConstants constants;
        bool operator==(const CngaDetailed&) const = default;
    };
    struct NonIsothermal {
        TemperatureProfile profile;
        double gravity;
        GasConstants constants;
        bool operator==(const NonIsothermal&) const = default;
    };
    using Variant = std::variant<Ideal, CngaIsothermal, CngaDetailed, NonIsothermal>;

    static EosModel ideal(double wave_speed);
    static EosModel cnga(double b1 = kCngaB1, double b2 = kCngaB2, double rt = kCngaRT);
    static EosModel cnga_detailed(double temperature, double gravity,
                                  const GasConstants& constants = {});
    static EosModel cnga_nonisothermal(const TemperatureProfile& profile, double gravity,
                                       const GasConstants& constants = {});

    const Variant& variant() const noexcept { return model_; }
    bool is_isothermal() const noexcept;

    // Short tag used in configs and reports: ideal, cnga, cnga_detailed,
    // cnga_nonisothermal.
    std::string name() const;

    // Density/pressure relation at position x (m). Only the non-isothermal
    // variant depends on x.
    PressureMap at(double x = 0.0) const;

    bool operator==(const EosModel&) const = default;

private:
    explicit EosModel(Variant v) : model_(std::move(v)) {}
    Variant model_;
};

// Checked evaluations. Negative pressure or density throws ErrorKind::domain.
double compressibility(double p, const EosModel& model, double x = 0.0);
double density_from_pressure(double p, const EosModel& model, double x = 0.0);
double pressure_from_density(double rho, const EosModel& model, double x = 0.0);
double wave_speed_sq(double rho, const EosModel& model, double x = 0.0);

} // namespace gasnet
