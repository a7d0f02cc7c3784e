#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace gasnet {

// Time-varying schedule for boundary values, withdrawals and compressor
// ratios. Immutable once built.
class TimeProfile {
public:
    struct Constant {
        double value;
        bool operator==(const Constant&) const = default;
    };
    // wave(t) = sin or cos of omega (t - phase);
    //   relative: offset (1 + amplitude wave(t))
    //   affine:   offset + amplitude wave(t)
    // Before `start` (when set) the profile holds at `offset`.
    struct Harmonic {
        double offset = 0.0;
        double amplitude = 0.0;
        double omega = 0.0;  // rad/s
        double phase = 0.0;  // s
        bool relative = true;
        bool cosine = false;
        std::optional<double> start;
        bool operator==(const Harmonic&) const = default;
    };
    struct PiecewiseLinear {
        std::vector<std::pair<double, double>> knots;  // (t, value), strictly increasing t
        bool operator==(const PiecewiseLinear&) const = default;
    };
    // Right-open intervals [t_{k-1}, t_end_k); past the last end the last
    // value is held.
    struct StepSequence {
        std::vector<std::pair<double, double>> intervals;  // (t_end, value)
        bool operator==(const StepSequence&) const = default;
    };
    using Variant = std::variant<Constant, Harmonic, PiecewiseLinear, StepSequence>;

    TimeProfile() : TimeProfile(Constant{0.0}) {}
    TimeProfile(Variant v, std::optional<double> period = std::nullopt);

    static TimeProfile constant(double value) { return TimeProfile(Constant{value}); }

    // Throws ErrorKind::domain for t < 0. In strict mode, a piecewise-linear
    // lookup outside the knot range throws instead of clamping.
    double evaluate(double t, bool strict = false) const;
    double operator()(double t) const { return evaluate(t); }

    const Variant& variant() const noexcept { return profile_; }
    std::optional<double> period() const noexcept { return period_; }

    // Lower bound of the profile's values over one period (or over the knot
    // range). Used to validate positivity and ratio >= 1 constraints.
    double min_value() const;

    bool operator==(const TimeProfile&) const = default;

private:
    Variant profile_;
    std::optional<double> period_;
};


} // namespace gasnet
