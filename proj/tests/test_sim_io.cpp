#include "doctest.h"

#include "gasnet/error.hpp"
#include "gasnet/sim_io.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace gasnet;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "gasnet_sim_io_test";
    fs::create_directories(dir);
    return dir / name;
}

std::string error_text(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return std::string(to_string(e.kind())) + "|" + e.what();
    }
    return "no error";
}

const char* kTwoNode = R"({
  "schema": "v1",
  "eos": {"model": "ideal", "wave_speed": 340},
  "nodes": [
    {"id": "a", "kind": "slack", "profile": {"type": "constant", "value": 5e6}},
    {"id": "b", "kind": "demand", "profile": {"type": "constant", "value": 40}}
  ],
  "pipes": [{"id": "p", "from": "a", "to": "b", "length": 5000, "diameter": 0.5, "friction": 0.01}],
  "simulation": {"dt": 0.5, "t_end": 120, "dx_target": 500, "output_cadence": 30}
})";

} // namespace

TEST_CASE("bundled five-node config matches the built-in definition") {
    const auto cfg = load_config(std::string(GASNET_CONFIG_DIR) + "/five_node.cfg", true);
    CHECK(cfg == five_node_config());
}

TEST_CASE("bundled single-pipe config loads strictly") {
    const auto cfg = load_config(std::string(GASNET_CONFIG_DIR) + "/single_pipe.cfg", true);
    CHECK(cfg.network.nodes.size() == 2);
    CHECK(cfg.network.pipes.size() == 1);
    CHECK(cfg.simulation.dx_target == 200.0);
}

TEST_CASE("serialize and parse round trip every profile and eos kind") {
    auto cfg = five_node_config();
    for (const auto& eos : {EosModel::ideal(377.0), EosModel::cnga(), EosModel::cnga_detailed(288.7, 0.6),
                            EosModel::cnga_nonisothermal({278.0, 10.0, 1e-4}, 0.65)}) {
        cfg.eos = eos;
        cfg.network.nodes[2].profile =
            TimeProfile(TimeProfile::StepSequence{{{600.0, 10.0}, {1800.0, 0.0}, {1e9, 5.0}}});
        cfg.network.nodes[1].profile = TimeProfile(TimeProfile::Harmonic{7.0, 0.5, 1e-3, 30.0, true, false, 60.0});
        cfg.simulation.initial = SimulationConfig::Initial::uniform;
        const auto text = serialize_config(cfg);
        const auto back = parse_config(text, true);
        CHECK(back == cfg);
        CHECK(serialize_config(back) == text);
    }
}

TEST_CASE("strict mode rejects unknown keys, lenient mode ignores them") {
    std::string text = kTwoNode;
    text.insert(text.find("\"schema\""), "\"colour\": \"blue\",\n  ");
    CHECK(error_text([&] { parse_config(text, true); }).find("unknown key 'colour'") != std::string::npos);
    CHECK_NOTHROW(parse_config(text, false));
}

TEST_CASE("all problems are reported together") {
    std::string text = kTwoNode;
    text.replace(text.find("\"slack\""), 7, "\"demand\"");
    text.replace(text.find("5000"), 4, "-5000");
    text.replace(text.find("\"dt\": 0.5"), 9, "\"dt\": 0.0");
    const auto msg = error_text([&] { parse_config(text, true); });
    CHECK(msg.rfind("validation_error|", 0) == 0);
    CHECK(msg.find("slack") != std::string::npos);
    CHECK(msg.find("length must be positive") != std::string::npos);
    CHECK(msg.find("simulation.dt: must be positive") != std::string::npos);
}

TEST_CASE("syntax errors carry line and column") {
    const auto msg = error_text([] { parse_config("{\n  \"schema\": v1\n}", true, "broken.cfg"); });
    CHECK(msg.find("broken.cfg") != std::string::npos);
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(error_text([] { load_config("/nonexistent/x.cfg"); }).rfind("io_error", 0) == 0);
}

TEST_CASE("unknown eos model and bad profile type are named") {
    std::string text = kTwoNode;
    text.replace(text.find("\"ideal\""), 7, "\"vdw\"");
    text.replace(text.find("\"constant\""), 10, "\"ramp\"");
    const auto msg = error_text([&] { parse_config(text, false); });
    CHECK(msg.find("unknown eos model 'vdw'") != std::string::npos);
    CHECK(msg.find("unknown profile type 'ramp'") != std::string::npos);
}

TEST_CASE("sha256 and number formatting") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(6.5e6) == "6500000");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(summary_path_for("out/run.csv") == "out/run.summary.json");
    CHECK(summary_path_for("run") == "run.summary.json");
}

TEST_CASE("run writes the golden header and reproducible rows") {
    auto cfg = parse_config(kTwoNode, true);
    cfg.simulation.output_path = scratch("two_node_a.csv").string();
    const auto a = run_config(cfg);
    cfg.simulation.output_path = scratch("two_node_b.csv").string();
    const auto b = run_config(cfg);

    const auto text = slurp(a.csv_path);
    CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    CHECK(text == slurp(b.csv_path));
    CHECK(a.summary.steps == 240);
    CHECK(a.summary.samples == 5);
    // 2 nodes x 2 + 1 pipe x 5 + 3 ledger rows per sample
    const auto lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines == 1 + 5 * 12);

    const auto summary = nlohmann::json::parse(slurp(a.summary_path));
    for (const char* key : {"config_sha", "steps", "max_ledger_discrepancy_kg", "wall_seconds"}) {
        CHECK(summary.contains(key));
    }
    CHECK(summary["steps"] == 240);
    CHECK(summary["max_ledger_discrepancy_kg"].get<double>() < 1e-9 * a.summary.initial_mass);
}

TEST_CASE("zero-length run leaves a header-only file") {
    auto cfg = parse_config(kTwoNode, true);
    cfg.simulation.t_end = 0.0;
    cfg.simulation.output_path = scratch("empty.csv").string();
    const auto out = run_config(cfg);
    CHECK(slurp(out.csv_path) == std::string(kCsvHeader) + "\n");
    CHECK(out.summary.steps == 0);
}

TEST_CASE("overrides are applied and checked") {
    auto cfg = parse_config(kTwoNode, true);
    RunOverrides o;
    o.dt = 0.25;
    o.t_end = 60.0;
    apply_overrides(cfg, o);
    CHECK(cfg.simulation.dt == 0.25);
    CHECK(cfg.simulation.t_end == 60.0);
    o.cfl_safety = 1.5;
    CHECK(error_text([&] { apply_overrides(cfg, o); }).rfind("validation_error", 0) == 0);
}

TEST_CASE("a CFL-violating config stops before stepping") {
    auto cfg = parse_config(kTwoNode, true);
    cfg.simulation.dt = 1.05 * 500.0 / 340.0;
    cfg.simulation.output_path = scratch("cfl.csv").string();
    CHECK(error_text([&] { run_config(cfg); }).rfind("cfl_violation", 0) == 0);
}

namespace {

struct Row {
    double t;
    std::string entity, id, field;
    double value;
};

std::vector<Row> read_rows(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        std::istringstream s(line);
        std::string t, e, i, f, v;
        std::getline(s, t, ',');
        std::getline(s, e, ',');
        std::getline(s, i, ',');
        std::getline(s, f, ',');
        std::getline(s, v, ',');
        rows.push_back({std::stod(t), e, i, f, std::stod(v)});
    }
    return rows;
}

} // namespace

TEST_CASE("bundled five-node config runs at reduced resolution and the CSV reproduces the ledger") {
    auto cfg = load_config(std::string(GASNET_CONFIG_DIR) + "/five_node.cfg", true);
    RunOverrides o;
    o.dx = 1000.0;
    o.dt = 1.0;
    o.t_end = 1800.0;
    o.out = scratch("five_node_small.csv").string();
    apply_overrides(cfg, o);
    const auto out = run_config(cfg);
    CHECK(out.summary.steps == 1800);

    const auto rows = read_rows(out.csv_path);
    std::map<double, double> pipe_mass, ledger_mass, throughput, discrepancy;
    double last_t = -1.0;
    bool monotone = true;
    for (const auto& r : rows) {
        monotone = monotone && r.t >= last_t;
        last_t = r.t;
        if (r.entity == "pipe" && r.field == "mass") pipe_mass[r.t] += r.value;
        if (r.entity == "ledger" && r.field == "mass") ledger_mass[r.t] = r.value;
        if (r.entity == "ledger" && r.field == "throughput") throughput[r.t] = r.value;
        if (r.entity == "ledger" && r.field == "discrepancy") discrepancy[r.t] = r.value;
    }
    CHECK(monotone);
    REQUIRE(ledger_mass.size() == 31);
    const double m0 = ledger_mass.begin()->second;
    for (const auto& [t, m] : ledger_mass) {
        CHECK(std::abs(pipe_mass[t] - m) <= 1e-12 * m);
        CHECK(std::abs((m - m0 - throughput[t]) - discrepancy[t]) <= 1e-12 * m);
    }
}

TEST_CASE("a one-day run at one-minute cadence emits 1441 samples per field") {
    auto cfg = five_node_config();
    RunOverrides o;
    o.dx = 5000.0;
    o.dt = 10.0;
    o.out = scratch("five_node_day.csv").string();
    apply_overrides(cfg, o);
    const auto out = run_config(cfg);
    const auto rows = read_rows(out.csv_path);
    const auto n = std::count_if(rows.begin(), rows.end(), [](const Row& r) {
        return r.entity == "node" && r.id == "1" && r.field == "pressure";
    });
    CHECK(n == 1441);
    CHECK(out.summary.samples == 1441);
}
