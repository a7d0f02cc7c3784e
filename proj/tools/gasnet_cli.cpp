#include "gasnet/gasnet.h"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNumerical = 2;

struct Common {
    std::optional<double> dt, dx, t_end, cadence, cfl_safety;
    std::optional<std::string> out;
    bool strict = false;
    bool parallel = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--dt", c.dt, "time step [s]")->check(CLI::PositiveNumber);
    cmd->add_option("--dx", c.dx, "target cell size [m]")->check(CLI::PositiveNumber);
    cmd->add_option("--t-end", c.t_end, "end time [s]")->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", c.out, "output CSV (summary JSON goes next to it)");
    cmd->add_option("--cadence", c.cadence, "output cadence [s]")->check(CLI::PositiveNumber);
    cmd->add_option("--cfl-safety", c.cfl_safety, "CFL safety factor in (0, 1], default 0.9");
    cmd->add_flag("--strict", c.strict, "reject unknown config keys");
    cmd->add_flag("--parallel", c.parallel, "parallel network step");
}

gasnet_run_options options_of(const Common& c, const std::string* out = nullptr) {
    gasnet_run_options o;
    gasnet_run_options_init(&o);
    if (c.dt) o.dt = *c.dt;
    if (c.dx) o.dx = *c.dx;
    if (c.t_end) o.t_end = *c.t_end;
    if (c.cadence) o.cadence = *c.cadence;
    if (c.cfl_safety) o.cfl_safety = *c.cfl_safety;
    if (out) o.out = out->c_str();
    else if (c.out) o.out = c.out->c_str();
    o.parallel = c.parallel ? 1 : 0;
    return o;
}

// One line on stderr: reason=<token> message="<text>".
int report(gasnet_status s) {
    if (s == GASNET_OK) return kExitOk;
    std::string msg = gasnet_last_error();
    for (auto& ch : msg) {
        if (ch == '\n') ch = ';';
        if (ch == '"') ch = '\'';
    }
    std::fprintf(stderr, "gasnet: reason=%s message=\"%s\"\n", gasnet_last_reason(), msg.c_str());
    return s == GASNET_E_NUMERICAL ? kExitNumerical : kExitInvalid;
}

void print_summary(const char* what, const gasnet_run_summary& s) {
    std::printf("%s: steps=%lld samples=%llu max_ledger_discrepancy_kg=%.6g initial_mass_kg=%.10g wall_seconds=%.3f "
                "config_sha=%s\n",
                what, static_cast<long long>(s.steps), static_cast<unsigned long long>(s.samples),
                s.max_ledger_discrepancy, s.initial_mass, s.wall_seconds, s.config_sha);
}

// "out.csv" + "ideal" -> "out_ideal.csv"
std::string tagged(const std::string& path, const std::string& tag) {
    const auto dot = path.rfind('.');
    const auto slash = path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + "_" + tag;
    return path.substr(0, dot) + "_" + tag + path.substr(dot);
}

int run_network(const std::string& config, const Common& c) {
    gasnet_network* net = nullptr;
    if (int rc = report(gasnet_network_create(config.c_str(), c.strict, &net))) return rc;
    const auto o = options_of(c);
    int rc = report(gasnet_network_configure(net, &o));
    gasnet_run_summary s{};
    if (!rc) rc = report(gasnet_network_run(net, &s));
    if (!rc) print_summary("run", s);
    gasnet_network_destroy(net);
    return rc;
}

int run_steady(const std::string& config, const Common& c) {
    gasnet_network* net = nullptr;
    if (int rc = report(gasnet_network_create(config.c_str(), c.strict, &net))) return rc;
    const auto o = options_of(c);
    const std::string out = c.out.value_or("steady.json");
    int rc = report(gasnet_network_configure(net, &o));
    if (!rc) rc = report(gasnet_network_steady(net, out.c_str()));
    if (!rc) std::printf("steady: written %s\n", out.c_str());
    gasnet_network_destroy(net);
    return rc;
}

int run_fast(const std::string& eos, const Common& c) {
    const std::string base = c.out.value_or("fast_transient.csv");
    if (eos != "both") {
        const std::string out = c.out ? base : tagged(base, eos);
        const auto o = options_of(c, &out);
        gasnet_transient_result r{};
        if (int rc = report(gasnet_fast_transient(eos.c_str(), &o, &r))) return rc;
        std::printf("fast-transient %s: dx=%g dt=%g max_outlet_velocity=%.6g\n", eos.c_str(), r.dx, r.dt,
                    r.max_velocity_right);
        print_summary("fast-transient", r.run);
        return kExitOk;
    }
    gasnet_transient_result res[2]{};
    const char* names[2] = {"ideal", "cnga"};
    for (int k = 0; k < 2; ++k) {
        const std::string out = tagged(base, names[k]);
        const auto o = options_of(c, &out);
        if (int rc = report(gasnet_fast_transient(names[k], &o, &res[k]))) return rc;
        std::printf("fast-transient %s: dx=%g dt=%g max_outlet_velocity=%.6g\n", names[k], res[k].dx, res[k].dt,
                    res[k].max_velocity_right);
    }
    std::printf("check non-ideal outlet velocity exceeds ideal: %s\n",
                res[1].max_velocity_right > res[0].max_velocity_right ? "true" : "false");
    return kExitOk;
}

int run_slow(const std::string& eos, int periods, const Common& c) {
    const std::string out = c.out.value_or(tagged("slow_transient.csv", eos));
    const auto o = options_of(c, &out);
    gasnet_transient_result r{};
    if (int rc = report(gasnet_slow_transient(eos.c_str(), periods, &o, &r))) return rc;
    std::printf("slow-transient %s: periods=%d dx=%g dt=%g\n", eos.c_str(), periods, r.dx, r.dt);
    print_summary("slow-transient", r.run);
    return kExitOk;
}

int run_temperature(std::optional<double> rate, const Common& c) {
    if (rate) {
        char tag[32];
        std::snprintf(tag, sizeof tag, "r%g", *rate);
        const std::string out = c.out.value_or(tagged("temperature.csv", tag));
        const auto o = options_of(c, &out);
        gasnet_transient_result r{};
        if (int rc = report(gasnet_temperature_effect(*rate, &o, &r))) return rc;
        std::printf("temperature r=%g: dx=%g dt=%g\n", *rate, r.dx, r.dt);
        print_summary("temperature", r.run);
        return kExitOk;
    }
    const auto o = options_of(c);
    gasnet_temperature_comparison t{};
    if (int rc = report(gasnet_temperature_compare(1e-3, 1e-4, &o, &t))) return rc;
    std::printf("temperature r=1e-3 vs r=1e-4 (relative RMS after forcing starts)\n"
                "  left flux %.4g (absolute %.4g)\n  right pressure %.4g\n  right density %.4g\n"
                "  right flux %.4g\n  right velocity %.4g\n"
                "check left flux difference exceeds right-end differences: %s\n",
                t.left_flux_relative, t.left_flux_rms, t.right_pressure_relative, t.right_density_relative,
                t.right_flux_relative, t.right_velocity_relative, t.left_dominates ? "true" : "false");
    return kExitOk;
}

int run_convergence(int levels, bool self_reference, const Common& c) {
    const std::string out = c.out.value_or("convergence.json");
    gasnet_convergence_result r{};
    if (int rc = report(gasnet_convergence(levels, self_reference, out.c_str(), &r))) return rc;
    const char* names[3] = {"rho", "p", "phi"};
    for (int v = 0; v < 3; ++v) {
        std::printf("convergence %-3s last_two=%.4f endpoint=%.4f\n", names[v], r.last_two[v], r.endpoint[v]);
    }
    std::printf("check rates within reference tolerances: %s (report %s)\n", r.checks_passed ? "true" : "false",
                out.c_str());
    return kExitOk;
}

int run_five_node(const Common& c) {
    const auto o = options_of(c);
    gasnet_run_summary s{};
    if (int rc = report(gasnet_five_node(&o, &s))) return rc;
    print_summary("five-node", s);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transient gas pipeline network simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", gasnet_version());

    Common common;
    std::string config;
    std::string eos = "both";
    std::string slow_eos = "cnga";
    int periods = 50;
    std::optional<double> rate;
    int levels = 6;
    bool self_reference = false;

    auto* run = app.add_subcommand("run", "simulate a network config");
    run->add_option("config", config, "config file")->required();
    auto* validate = app.add_subcommand("validate", "check a config file");
    validate->add_option("config", config, "config file")->required();
    auto* steady = app.add_subcommand("steady", "solve the steady state of a config (JSON to --out)");
    steady->add_option("config", config, "config file")->required();
    auto* conv = app.add_subcommand("convergence", "self-convergence study (JSON to --out)");
    conv->add_option("--levels", levels, "refinement levels")->check(CLI::Range(2, 8));
    conv->add_flag("--self-reference", self_reference, "compare the reference run with itself");
    auto* fast = app.add_subcommand("fast-transient", "outlet shut-in and restart");
    fast->add_option("--eos", eos, "ideal, cnga or both")->check(CLI::IsMember({"ideal", "cnga", "both"}));
    auto* slow = app.add_subcommand("slow-transient", "periodic inlet pressure");
    slow->add_option("--eos", slow_eos, "ideal or cnga")->check(CLI::IsMember({"ideal", "cnga"}));
    slow->add_option("--periods", periods, "12 h periods to simulate")->check(CLI::PositiveNumber);
    auto* temp = app.add_subcommand("temperature", "non-isothermal pipe; both rates are compared without --rate");
    temp->add_option("--rate", rate, "temperature decay rate [1/m]")->check(CLI::PositiveNumber);
    auto* five = app.add_subcommand("five-node", "five-node network with daily schedules");

    for (auto* cmd : {run, validate, steady, conv, fast, slow, temp, five}) add_common(cmd, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        for (auto& ch : msg) if (ch == '\n') ch = ';';
        std::fprintf(stderr, "gasnet: reason=usage_error message=\"%s\"\n", msg.c_str());
        return kExitInvalid;
    }

    if (common.cfl_safety && !(*common.cfl_safety > 0.0 && *common.cfl_safety <= 1.0)) {
        std::fprintf(stderr, "gasnet: reason=validation_error message=\"--cfl-safety must lie in (0, 1]\"\n");
        return kExitInvalid;
    }

    if (*run) return run_network(config, common);
    if (*validate) {
        const int rc = report(gasnet_validate_config(config.c_str(), common.strict));
        if (!rc) std::printf("valid: %s\n", config.c_str());
        return rc;
    }
    if (*steady) return run_steady(config, common);
    if (*conv) return run_convergence(levels, self_reference, common);
    if (*fast) return run_fast(eos, common);
    if (*slow) return run_slow(slow_eos, periods, common);
    if (*temp) return run_temperature(rate, common);
    if (*five) return run_five_node(common);
    return kExitInvalid;
}
