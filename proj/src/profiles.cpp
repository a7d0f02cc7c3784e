#include "gasnet/profiles.hpp"

#include "gasnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace gasnet {

TimeProfile::TimeProfile(Variant v, std::optional<double> period)
    : profile_(std::move(v)), period_(period) {
    if (period_ && !(*period_ > 0.0)) {
        fail(ErrorKind::validation, "profile period must be positive");
    }
    if (const auto* pl = std::get_if<PiecewiseLinear>(&profile_)) {
        if (pl->knots.empty()) {
            fail(ErrorKind::validation, "piecewise_linear profile needs at least one knot");
        }
        for (std::size_t k = 1; k < pl->knots.size(); ++k) {
            if (!(pl->knots[k].first > pl->knots[k - 1].first)) {
                fail(ErrorKind::validation, "piecewise_linear knots must be strictly increasing in t");
            }
        }
    }
    if (const auto* ss = std::get_if<StepSequence>(&profile_)) {
        if (ss->intervals.empty()) {
            fail(ErrorKind::validation, "step_sequence profile needs at least one interval");
        }
        for (std::size_t k = 1; k < ss->intervals.size(); ++k) {
            if (!(ss->intervals[k].first > ss->intervals[k - 1].first)) {
                fail(ErrorKind::validation, "step_sequence interval ends must be increasing");
            }
        }
    }
}

namespace {

double interpolate(const std::vector<std::pair<double, double>>& knots, double t, bool strict) {
    if (t <= knots.front().first) {
        if (strict && t < knots.front().first) {
            fail(ErrorKind::domain, "piecewise_linear: t before first knot");
        }
        return knots.front().second;
    }
    if (t >= knots.back().first) {
        if (strict && t > knots.back().first) {
            fail(ErrorKind::domain, "piecewise_linear: t after last knot");
        }
        return knots.back().second;
    }
    const auto hi = std::upper_bound(knots.begin(), knots.end(), t,
                                     [](double v, const auto& k) { return v < k.first; });
    const auto lo = std::prev(hi);
    if (t == lo->first) {
        return lo->second;
    }
    const double w = (t - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

} // namespace

double TimeProfile::evaluate(double t, bool strict) const {
    if (!(t >= 0.0)) {
        fail(ErrorKind::domain, "profile evaluated at negative time");
    }
    if (period_) {
        t = std::fmod(t, *period_);
    }
    struct Visitor {
        double t;
        bool strict;
        double operator()(const Constant& c) const { return c.value; }
        double operator()(const Harmonic& h) const {
            if (h.start && t < *h.start) {
                return h.offset;
            }
            const double arg = h.omega * (t - h.phase);
            const double wave = h.cosine ? std::cos(arg) : std::sin(arg);
            return h.relative ? h.offset * (1.0 + h.amplitude * wave) : h.offset + h.amplitude * wave;
        }
        double operator()(const PiecewiseLinear& p) const { return interpolate(p.knots, t, strict); }
        double operator()(const StepSequence& s) const {
            for (const auto& [t_end, value] : s.intervals) {
                if (t < t_end) {
                    return value;
                }
            }
            return s.intervals.back().second;
        }
    };
    return std::visit(Visitor{t, strict}, profile_);
}

double TimeProfile::min_value() const {
    struct Visitor {
        double operator()(const Constant& c) const { return c.value; }
        double operator()(const Harmonic& h) const {
            const double swing = std::abs(h.amplitude);
            const double low = h.relative ? h.offset * (1.0 - swing) : h.offset - swing;
            return std::min(low, h.offset);
        }
        double operator()(const PiecewiseLinear& p) const {
            double m = p.knots.front().second;
            for (const auto& k : p.knots) m = std::min(m, k.second);
            return m;
        }
        double operator()(const StepSequence& s) const {
            double m = s.intervals.front().second;
            for (const auto& k : s.intervals) m = std::min(m, k.second);
            return m;
        }
    };
    return std::visit(Visitor{}, profile_);
}

} // namespace gasnet
