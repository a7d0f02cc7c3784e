#include "doctest.h"

#include "gasnet/gasnet.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

namespace {

const std::string kConfigs = GASNET_CONFIG_DIR;

std::string scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "gasnet_capi_test";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

} // namespace

TEST_CASE("null arguments and unknown ids are rejected without crashing") {
    CHECK(gasnet_validate_config(nullptr, 0) == GASNET_E_ARGUMENT);
    CHECK(std::string(gasnet_last_reason()) == "invalid_argument");
    CHECK(gasnet_network_create("x", 0, nullptr) == GASNET_E_ARGUMENT);
    CHECK(gasnet_network_step(nullptr, 1.0, 0) == GASNET_E_ARGUMENT);
    gasnet_network_destroy(nullptr);

    gasnet_network* net = nullptr;
    REQUIRE(gasnet_network_create_five_node(&net) == GASNET_OK);
    double p = 0.0;
    CHECK(gasnet_network_node_pressure(net, "99", &p) == GASNET_E_INVALID);
    gasnet_network_destroy(net);
}

TEST_CASE("status codes follow the error class") {
    CHECK(gasnet_validate_config((kConfigs + "/five_node.cfg").c_str(), 1) == GASNET_OK);
    CHECK(gasnet_validate_config("/nonexistent.cfg", 0) == GASNET_E_IO);
    CHECK(std::string(gasnet_last_reason()) == "io_error");
    CHECK(gasnet_validate_config(GASNET_FIXTURE_DIR "/missing_slack.cfg", 0) == GASNET_E_INVALID);
    CHECK(std::string(gasnet_last_error()).find("slack") != std::string::npos);
}

TEST_CASE("steady state, stepping and the CFL guard through the handle") {
    gasnet_network* net = nullptr;
    REQUIRE(gasnet_network_create((kConfigs + "/five_node.cfg").c_str(), 1, &net) == GASNET_OK);
    gasnet_run_options o;
    gasnet_run_options_init(&o);
    CHECK(std::isnan(o.dt));
    o.dx = 1000.0;
    REQUIRE(gasnet_network_configure(net, &o) == GASNET_OK);
    REQUIRE(gasnet_network_steady(net, scratch("steady.json").c_str()) == GASNET_OK);
    double p1 = 0.0;
    CHECK(gasnet_network_node_pressure(net, "1", &p1) == GASNET_OK);
    CHECK(p1 == 3447378.645);

    double limit = 0.0;
    REQUIRE(gasnet_network_cfl_max_dt(net, 1.0, &limit) == GASNET_OK);
    double m0 = 0.0, m1 = 0.0, t = 0.0;
    gasnet_network_total_mass(net, &m0);
    CHECK(gasnet_network_step(net, 1.05 * limit, 0) == GASNET_E_NUMERICAL);
    CHECK(std::string(gasnet_last_reason()) == "cfl_violation");
    for (int k = 0; k < 10; ++k) REQUIRE(gasnet_network_step(net, 0.5 * limit, 0) == GASNET_OK);
    gasnet_network_time(net, &t);
    gasnet_network_total_mass(net, &m1);
    CHECK(t == doctest::Approx(5.0 * limit));
    CHECK(std::abs(m1 - m0) < 1e-3 * m0);
    gasnet_network_destroy(net);
}

TEST_CASE("run writes outputs and reports a summary") {
    gasnet_network* net = nullptr;
    REQUIRE(gasnet_network_create((kConfigs + "/single_pipe.cfg").c_str(), 1, &net) == GASNET_OK);
    gasnet_run_options o;
    gasnet_run_options_init(&o);
    o.t_end = 120.0;
    const auto out = scratch("single.csv");
    o.out = out.c_str();
    REQUIRE(gasnet_network_configure(net, &o) == GASNET_OK);
    gasnet_run_summary s{};
    REQUIRE(gasnet_network_run(net, &s) == GASNET_OK);
    CHECK(s.steps == 480);
    CHECK(s.samples == 3);
    CHECK(std::strlen(s.config_sha) == 64);
    CHECK(std::filesystem::exists(scratch("single.summary.json")));
    gasnet_network_destroy(net);
}

TEST_CASE("experiment entry points") {
    gasnet_convergence_result c{};
    REQUIRE(gasnet_convergence(2, 1, nullptr, &c) == GASNET_OK);
    CHECK(c.levels == 2);

    gasnet_run_options o;
    gasnet_run_options_init(&o);
    o.dx = 1000.0;
    o.t_end = 900.0;
    gasnet_transient_result r{};
    CHECK(gasnet_fast_transient("vdw", &o, &r) == GASNET_E_INVALID);
    REQUIRE(gasnet_fast_transient("ideal", &o, &r) == GASNET_OK);
    CHECK(r.dx == 1000.0);
    CHECK(r.run.samples == 16);
    CHECK(gasnet_slow_transient("cnga", 0, &o, &r) == GASNET_E_INVALID);
}
