#include "gasnet/gasnet.h"

#include "gasnet/error.hpp"
#include "gasnet/experiments.hpp"
#include "gasnet/sim_io.hpp"
#include "gasnet/steady.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>

using namespace gasnet;

struct gasnet_network {
    NetworkConfig config;
    std::unique_ptr<Network> net;
    bool initialised = false;  // state loaded (steady or uniform)
};

namespace {

thread_local std::string g_error;
thread_local std::string g_reason;

gasnet_status record(gasnet_status status, std::string reason, std::string message) {
    g_reason = std::move(reason);
    g_error = std::move(message);
    return status;
}

gasnet_status status_of(ErrorKind kind) {
    if (is_numerical(kind)) return GASNET_E_NUMERICAL;
    if (kind == ErrorKind::io) return GASNET_E_IO;
    return GASNET_E_INVALID;
}

template <class F>
gasnet_status guarded(F&& f) {
    try {
        f();
        return GASNET_OK;
    } catch (const Error& e) {
        return record(status_of(e.kind()), std::string(to_string(e.kind())), e.what());
    } catch (const std::bad_alloc&) {
        return record(GASNET_E_INTERNAL, "out_of_memory", "out of memory");
    } catch (const std::exception& e) {
        return record(GASNET_E_INTERNAL, "internal_error", e.what());
    } catch (...) {
        return record(GASNET_E_INTERNAL, "internal_error", "unknown exception");
    }
}

gasnet_status null_argument(const char* what) {
    return record(GASNET_E_ARGUMENT, "invalid_argument", std::string(what) + " must not be null");
}

std::optional<double> given(double v) {
    if (std::isnan(v)) return std::nullopt;
    return v;
}

RunOverrides overrides_from(const gasnet_run_options* o) {
    RunOverrides r;
    if (!o) return r;
    r.dt = given(o->dt);
    r.dx = given(o->dx);
    r.t_end = given(o->t_end);
    r.cadence = given(o->cadence);
    r.cfl_safety = given(o->cfl_safety);
    if (o->out) r.out = std::string(o->out);
    r.parallel = o->parallel != 0;
    return r;
}

TransientOptions transient_from(const gasnet_run_options* o) {
    TransientOptions t;
    if (!o) return t;
    if (auto v = given(o->dt)) t.dt = *v;
    if (auto v = given(o->dx)) t.dx = *v;
    if (auto v = given(o->t_end)) t.t_end = *v;
    if (auto v = given(o->cadence)) t.cadence = *v;
    if (auto v = given(o->cfl_safety)) t.cfl_safety = *v;
    if (!(t.dt >= 0.0 && t.dx >= 0.0 && t.t_end >= 0.0 && t.cadence > 0.0 && t.cfl_safety > 0.0 &&
          t.cfl_safety <= 1.0)) {
        fail(ErrorKind::validation, "run options out of range");
    }
    return t;
}

void fill(gasnet_run_summary* out, const RunSummary& s, const std::string& sha) {
    if (!out) return;
    *out = {};
    out->steps = s.steps;
    out->samples = s.samples;
    out->initial_mass = s.initial_mass;
    out->max_ledger_discrepancy = s.max_ledger_discrepancy;
    out->wall_seconds = s.wall_seconds;
    std::strncpy(out->config_sha, sha.c_str(), sizeof out->config_sha - 1);
}

void ensure_network(gasnet_network* h) {
    if (!h->net) h->net = std::make_unique<Network>(h->config.network, h->config.eos, h->config.simulation.dx_target);
}

void ensure_initialised(gasnet_network* h) {
    if (h->initialised) return;
    h->net = std::make_unique<Network>(build_network(h->config));
    h->initialised = true;
}

void finish_transient(const TransientReport& r, const TransientOptions& o, const gasnet_run_options* opts,
                      gasnet_transient_result* out) {
    const auto summary = transient_summary(r, o);
    if (opts && opts->out) {
        write_boundary_series(r.series, opts->out);
        write_json(summary_path_for(opts->out), summary);
    }
    if (!out) return;
    *out = {};
    out->dx = r.dx;
    out->dt = r.dt;
    out->max_velocity_left = summary["max_abs_velocity_left"].get<double>();
    out->max_velocity_right = summary["max_abs_velocity_right"].get<double>();
    fill(&out->run, r.run, summary["config_sha"].get<std::string>());
}

} // namespace

extern "C" {

const char* gasnet_last_error(void) { return g_error.c_str(); }
const char* gasnet_last_reason(void) { return g_reason.c_str(); }
const char* gasnet_version(void) { return "1.0.0"; }

void gasnet_run_options_init(gasnet_run_options* o) {
    if (!o) return;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    *o = {nan, nan, nan, nan, nan, nullptr, 0};
}

gasnet_status gasnet_validate_config(const char* path, int strict) {
    if (!path) return null_argument("path");
    return guarded([&] { load_config(path, strict != 0); });
}

gasnet_status gasnet_network_create(const char* path, int strict, gasnet_network** out) {
    if (!path) return null_argument("path");
    if (!out) return null_argument("out");
    *out = nullptr;
    return guarded([&] {
        auto h = std::make_unique<gasnet_network>();
        h->config = load_config(path, strict != 0);
        ensure_network(h.get());
        *out = h.release();
    });
}

gasnet_status gasnet_network_create_five_node(gasnet_network** out) {
    if (!out) return null_argument("out");
    *out = nullptr;
    return guarded([&] {
        auto h = std::make_unique<gasnet_network>();
        h->config = five_node_config();
        ensure_network(h.get());
        *out = h.release();
    });
}

void gasnet_network_destroy(gasnet_network* h) { delete h; }

gasnet_status gasnet_network_configure(gasnet_network* h, const gasnet_run_options* o) {
    if (!h) return null_argument("network");
    if (!o) return null_argument("options");
    return guarded([&] {
        auto cfg = h->config;
        const auto r = overrides_from(o);
        apply_overrides(cfg, r);
        const bool regrid = cfg.simulation.dx_target != h->config.simulation.dx_target;
        h->config = std::move(cfg);
        if (regrid) {
            h->net.reset();
            h->initialised = false;
            ensure_network(h);
        }
    });
}

gasnet_status gasnet_network_steady(gasnet_network* h, const char* json_path) {
    if (!h) return null_argument("network");
    return guarded([&] {
        ensure_network(h);
        SteadyOptions o;
        o.time = h->net->time();
        const auto r = steady_state_solve(*h->net, o);
        h->initialised = true;
        if (json_path) write_json(json_path, steady_to_json(*h->net, r));
    });
}

gasnet_status gasnet_network_step(gasnet_network* h, double dt, int parallel) {
    if (!h) return null_argument("network");
    return guarded([&] {
        ensure_initialised(h);
        const double limit = h->net->cfl_max_dt(1.0);
        if (!(dt > 0.0)) fail(ErrorKind::validation, "dt must be positive");
        if (dt > limit) {
            fail(ErrorKind::cfl_violation, "dt " + format_number(dt) + " exceeds the CFL bound " + format_number(limit));
        }
        h->net->step(dt, parallel != 0);
    });
}

gasnet_status gasnet_network_run(gasnet_network* h, gasnet_run_summary* summary) {
    if (!h) return null_argument("network");
    return guarded([&] {
        ensure_initialised(h);
        const auto out = continue_run(*h->net, h->config, false);
        fill(summary, out.summary, out.config_sha);
    });
}

gasnet_status gasnet_network_time(const gasnet_network* h, double* t) {
    if (!h) return null_argument("network");
    if (!t) return null_argument("t");
    *t = h->net ? h->net->time() : 0.0;
    return GASNET_OK;
}

gasnet_status gasnet_network_total_mass(const gasnet_network* h, double* kg) {
    if (!h) return null_argument("network");
    if (!kg) return null_argument("kg");
    *kg = h->net ? h->net->total_mass() : 0.0;
    return GASNET_OK;
}

gasnet_status gasnet_network_node_pressure(const gasnet_network* h, const char* id, double* pa) {
    if (!h) return null_argument("network");
    if (!id) return null_argument("node_id");
    if (!pa) return null_argument("pa");
    return guarded([&] { *pa = h->net->nodes()[h->net->node_index(id)].pressure; });
}

gasnet_status gasnet_network_cfl_max_dt(const gasnet_network* h, double safety, double* dt) {
    if (!h) return null_argument("network");
    if (!dt) return null_argument("dt");
    return guarded([&] { *dt = h->net->cfl_max_dt(safety); });
}

gasnet_status gasnet_convergence(int levels, int self_reference, const char* json_path,
                                 gasnet_convergence_result* result) {
    return guarded([&] {
        ConvergenceOptions o;
        if (levels > 0) o.levels = levels;
        o.self_reference = self_reference != 0;
        if (o.levels < 2) fail(ErrorKind::validation, "convergence needs at least 2 levels");
        const auto r = run_convergence_study(o);
        const auto doc = convergence_to_json(r);
        if (json_path) write_json(json_path, doc);
        if (result) {
            *result = {};
            result->levels = o.levels;
            result->checks_passed = doc["checks"]["all"].get<bool>() ? 1 : 0;
            for (int v = 0; v < 3; ++v) {
                result->last_two[v] = r.rates[v].last_two;
                result->endpoint[v] = r.rates[v].endpoint;
            }
        }
    });
}

gasnet_status gasnet_fast_transient(const char* eos, const gasnet_run_options* options,
                                    gasnet_transient_result* result) {
    if (!eos) return null_argument("eos");
    return guarded([&] {
        const auto o = transient_from(options);
        finish_transient(run_fast_transient(eos, o), o, options, result);
    });
}

gasnet_status gasnet_slow_transient(const char* eos, int periods, const gasnet_run_options* options,
                                    gasnet_transient_result* result) {
    if (!eos) return null_argument("eos");
    return guarded([&] {
        if (periods < 1) fail(ErrorKind::validation, "periods must be at least 1");
        const auto o = transient_from(options);
        finish_transient(run_slow_transient(eos, o, periods), o, options, result);
    });
}

gasnet_status gasnet_temperature_effect(double decay_rate, const gasnet_run_options* options,
                                        gasnet_transient_result* result) {
    return guarded([&] {
        const auto o = transient_from(options);
        finish_transient(run_temperature_effect(decay_rate, o), o, options, result);
    });
}

gasnet_status gasnet_temperature_compare(double rate_a, double rate_b, const gasnet_run_options* options,
                                         gasnet_temperature_comparison* result) {
    if (!result) return null_argument("result");
    return guarded([&] {
        const auto o = transient_from(options);
        const auto a = run_temperature_effect(rate_a, o);
        const auto b = run_temperature_effect(rate_b, o);
        const auto c = compare_temperature_runs(a, b);
        *result = {c.left_flux_rms, c.left_flux_relative, c.right_pressure_relative, c.right_density_relative,
                   c.right_flux_relative, c.right_velocity_relative, c.left_dominates() ? 1 : 0};
    });
}

gasnet_status gasnet_five_node(const gasnet_run_options* options, gasnet_run_summary* summary) {
    return guarded([&] {
        auto cfg = five_node_config();
        if (options) apply_overrides(cfg, overrides_from(options));
        const auto out = run_config(cfg, options && options->parallel);
        fill(summary, out.summary, out.config_sha);
    });
}

} // extern "C"
