#include "gasnet/sim_io.hpp"

#include "gasnet/error.hpp"
#include "gasnet/steady.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

namespace gasnet {

using nlohmann::json;

namespace {

// Collects every problem found while walking the document.
class Reader {
public:
    Reader(bool strict, std::vector<std::string>& problems) : strict_(strict), problems_(problems) {}

    void problem(const std::string& path, const std::string& what) {
        problems_.push_back(path + ": " + what);
    }

    bool object(const json& j, const std::string& path) {
        if (j.is_object()) return true;
        problem(path, "expected an object");
        return false;
    }

    void keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
        if (!strict_ || !j.is_object()) return;
        for (const auto& [k, v] : j.items()) {
            if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
                problem(path, "unknown key '" + k + "'");
            }
        }
    }

    std::optional<double> number(const json& j, const std::string& key, const std::string& path,
                                 std::optional<double> fallback = std::nullopt) {
        const auto it = j.find(key);
        if (it == j.end()) {
            if (!fallback) problem(path + "." + key, "missing");
            return fallback;
        }
        if (!it->is_number()) {
            problem(path + "." + key, "expected a number");
            return std::nullopt;
        }
        return it->get<double>();
    }

    std::optional<std::string> text(const json& j, const std::string& key, const std::string& path,
                                    std::optional<std::string> fallback = std::nullopt) {
        const auto it = j.find(key);
        if (it == j.end()) {
            if (!fallback) problem(path + "." + key, "missing");
            return fallback;
        }
        if (it->is_string()) return it->get<std::string>();
        // numeric ids are accepted and kept in their shortest form
        if (it->is_number_integer()) return std::to_string(it->get<long long>());
        problem(path + "." + key, "expected a string");
        return std::nullopt;
    }

    std::optional<bool> boolean(const json& j, const std::string& key, const std::string& path,
                                bool fallback) {
        const auto it = j.find(key);
        if (it == j.end()) return fallback;
        if (!it->is_boolean()) {
            problem(path + "." + key, "expected true or false");
            return std::nullopt;
        }
        return it->get<bool>();
    }

    std::optional<std::vector<std::pair<double, double>>> pairs(const json& j, const std::string& key,
                                                                const std::string& path) {
        const auto it = j.find(key);
        if (it == j.end()) {
            problem(path + "." + key, "missing");
            return std::nullopt;
        }
        if (!it->is_array()) {
            problem(path + "." + key, "expected an array of [t, value] pairs");
            return std::nullopt;
        }
        std::vector<std::pair<double, double>> out;
        for (std::size_t i = 0; i < it->size(); ++i) {
            const auto& e = (*it)[i];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                problem(path + "." + key + "[" + std::to_string(i) + "]", "expected [t, value]");
                return std::nullopt;
            }
            out.emplace_back(e[0].get<double>(), e[1].get<double>());
        }
        return out;
    }

    std::optional<TimeProfile> profile(const json& j, const std::string& path) {
        if (!object(j, path)) return std::nullopt;
        const auto type = text(j, "type", path);
        if (!type) return std::nullopt;
        std::optional<double> period;
        if (j.contains("period")) {
            period = number(j, "period", path);
            if (!period) return std::nullopt;
        }
        std::optional<TimeProfile::Variant> v;
        if (*type == "constant") {
            keys(j, path, {"type", "period", "value"});
            if (const auto value = number(j, "value", path)) v = TimeProfile::Constant{*value};
        } else if (*type == "harmonic") {
            keys(j, path, {"type", "period", "offset", "amplitude", "omega", "phase", "form", "wave", "start"});
            const auto offset = number(j, "offset", path);
            const auto amplitude = number(j, "amplitude", path);
            const auto omega = number(j, "omega", path);
            const auto phase = number(j, "phase", path, 0.0);
            const auto form = text(j, "form", path, std::string("relative"));
            const auto wave = text(j, "wave", path, std::string("sin"));
            std::optional<double> start;
            if (j.contains("start")) start = number(j, "start", path);
            bool ok = offset && amplitude && omega && phase && form && wave;
            if (form && *form != "relative" && *form != "affine") {
                problem(path + ".form", "expected 'relative' or 'affine'");
                ok = false;
            }
            if (wave && *wave != "sin" && *wave != "cos") {
                problem(path + ".wave", "expected 'sin' or 'cos'");
                ok = false;
            }
            if (ok) {
                v = TimeProfile::Harmonic{*offset, *amplitude, *omega, *phase,
                                          *form == "relative", *wave == "cos", start};
            }
        } else if (*type == "piecewise_linear") {
            keys(j, path, {"type", "period", "knots"});
            if (auto knots = pairs(j, "knots", path)) v = TimeProfile::PiecewiseLinear{std::move(*knots)};
        } else if (*type == "step_sequence") {
            keys(j, path, {"type", "period", "intervals"});
            if (auto iv = pairs(j, "intervals", path)) v = TimeProfile::StepSequence{std::move(*iv)};
        } else {
            problem(path + ".type", "unknown profile type '" + *type + "'");
        }
        if (!v) return std::nullopt;
        try {
            return TimeProfile(std::move(*v), period);
        } catch (const Error& e) {
            problem(path, e.what());
            return std::nullopt;
        }
    }

    std::optional<EosModel> eos(const json& j, const std::string& path) {
        if (!object(j, path)) return std::nullopt;
        const auto model = text(j, "model", path);
        if (!model) return std::nullopt;
        try {
            if (*model == "ideal") {
                keys(j, path, {"model", "wave_speed"});
                if (const auto c = number(j, "wave_speed", path)) return EosModel::ideal(*c);
            } else if (*model == "cnga") {
                keys(j, path, {"model", "b1", "b2", "RT"});
                const auto b1 = number(j, "b1", path, kCngaB1);
                const auto b2 = number(j, "b2", path, kCngaB2);
                const auto rt = number(j, "RT", path, kCngaRT);
                if (b1 && b2 && rt) return EosModel::cnga(*b1, *b2, *rt);
            } else if (*model == "cnga_detailed") {
                keys(j, path, {"model", "T_kelvin", "gas_gravity"});
                const auto T = number(j, "T_kelvin", path);
                const auto G = number(j, "gas_gravity", path);
                if (T && G) return EosModel::cnga_detailed(*T, *G);
            } else if (*model == "cnga_nonisothermal") {
                keys(j, path, {"model", "T_ambient", "T_jump", "decay_rate", "gas_gravity"});
                const auto ta = number(j, "T_ambient", path);
                const auto tj = number(j, "T_jump", path);
                const auto r = number(j, "decay_rate", path);
                const auto G = number(j, "gas_gravity", path);
                if (ta && tj && r && G) return EosModel::cnga_nonisothermal({*ta, *tj, *r}, *G);
            } else {
                problem(path + ".model", "unknown eos model '" + *model + "'");
            }
        } catch (const Error& e) {
            problem(path, e.what());
        }
        return std::nullopt;
    }

private:
    bool strict_;
    std::vector<std::string>& problems_;
};

std::string join_problems(const std::string& origin, const std::vector<std::string>& problems) {
    std::ostringstream msg;
    msg << "invalid config " << origin << " (" << problems.size() << " problem"
        << (problems.size() == 1 ? "" : "s") << "):";
    for (const auto& p : problems) msg << "\n  - " << p;
    return msg.str();
}

const char* kind_name(NodeSpec::Kind k) { return k == NodeSpec::Kind::slack ? "slack" : "demand"; }

} // namespace

NetworkConfig parse_config(std::string_view text, bool strict, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::validation, origin + ": " + e.what());
    }

    std::vector<std::string> problems;
    Reader r(strict, problems);
    NetworkConfig cfg;
    if (!r.object(doc, "$")) fail(ErrorKind::validation, join_problems(origin, problems));
    r.keys(doc, "$", {"schema", "eos", "nodes", "pipes", "compressors", "simulation"});

    if (const auto schema = r.text(doc, "schema", "$")) {
        if (*schema != kSchemaVersion) r.problem("$.schema", "unsupported schema '" + *schema + "' (expected v1)");
        cfg.schema = *schema;
    }
    bool structural = true;
    if (doc.contains("eos")) {
        if (auto m = r.eos(doc["eos"], "$.eos")) cfg.eos = std::move(*m);
    } else {
        r.problem("$.eos", "missing");
    }

    auto array_of = [&](const char* key, bool required) -> const json* {
        const auto it = doc.find(key);
        if (it == doc.end()) {
            if (required) r.problem(std::string("$.") + key, "missing");
            return nullptr;
        }
        if (!it->is_array()) {
            r.problem(std::string("$.") + key, "expected an array");
            return nullptr;
        }
        return &*it;
    };

    const std::size_t before = problems.size();
    if (const auto* nodes = array_of("nodes", true)) {
        for (std::size_t i = 0; i < nodes->size(); ++i) {
            const auto& n = (*nodes)[i];
            const std::string path = "$.nodes[" + std::to_string(i) + "]";
            if (!r.object(n, path)) continue;
            r.keys(n, path, {"id", "kind", "profile"});
            const auto id = r.text(n, "id", path);
            const auto kind = r.text(n, "kind", path);
            std::optional<TimeProfile> prof;
            if (n.contains("profile")) prof = r.profile(n["profile"], path + ".profile");
            else r.problem(path + ".profile", "missing");
            if (kind && *kind != "slack" && *kind != "demand") {
                r.problem(path + ".kind", "expected 'slack' or 'demand'");
                continue;
            }
            if (id && kind && prof) {
                cfg.network.nodes.push_back(
                    {*id, *kind == "slack" ? NodeSpec::Kind::slack : NodeSpec::Kind::demand, *prof});
            }
        }
    }
    if (const auto* pipes = array_of("pipes", true)) {
        for (std::size_t i = 0; i < pipes->size(); ++i) {
            const auto& p = (*pipes)[i];
            const std::string path = "$.pipes[" + std::to_string(i) + "]";
            if (!r.object(p, path)) continue;
            r.keys(p, path, {"id", "from", "to", "length", "diameter", "friction"});
            const auto id = r.text(p, "id", path);
            const auto from = r.text(p, "from", path);
            const auto to = r.text(p, "to", path);
            const auto length = r.number(p, "length", path);
            const auto diameter = r.number(p, "diameter", path);
            const auto friction = r.number(p, "friction", path);
            if (id && from && to && length && diameter && friction) {
                cfg.network.pipes.push_back({*id, *from, *to, {*length, *diameter, *friction}});
            }
        }
    }
    if (const auto* comps = array_of("compressors", false)) {
        for (std::size_t i = 0; i < comps->size(); ++i) {
            const auto& c = (*comps)[i];
            const std::string path = "$.compressors[" + std::to_string(i) + "]";
            if (!r.object(c, path)) continue;
            r.keys(c, path, {"id", "pipe", "side", "ratio"});
            const auto id = r.text(c, "id", path);
            const auto pipe = r.text(c, "pipe", path);
            const auto side = r.text(c, "side", path, std::string("inlet"));
            std::optional<TimeProfile> ratio;
            if (c.contains("ratio")) ratio = r.profile(c["ratio"], path + ".ratio");
            else r.problem(path + ".ratio", "missing");
            if (side && *side != "inlet" && *side != "outlet") {
                r.problem(path + ".side", "expected 'inlet' or 'outlet'");
                continue;
            }
            if (id && pipe && side && ratio) {
                cfg.network.compressors.push_back(
                    {*id, *pipe, *side == "inlet" ? PipeEnd::inlet : PipeEnd::outlet, *ratio});
            }
        }
    }
    structural = problems.size() == before;

    if (const auto it = doc.find("simulation"); it != doc.end()) {
        const std::string path = "$.simulation";
        if (r.object(*it, path)) {
            const auto& s = *it;
            r.keys(s, path, {"dt", "t_end", "dx_target", "cfl_safety", "output_cadence", "output_path", "initial"});
            auto& sim = cfg.simulation;
            const SimulationConfig d;
            if (auto v = r.number(s, "dt", path, d.dt)) sim.dt = *v;
            if (auto v = r.number(s, "t_end", path, d.t_end)) sim.t_end = *v;
            if (auto v = r.number(s, "dx_target", path, d.dx_target)) sim.dx_target = *v;
            if (auto v = r.number(s, "cfl_safety", path, d.cfl_safety)) sim.cfl_safety = *v;
            if (auto v = r.number(s, "output_cadence", path, d.output_cadence)) sim.output_cadence = *v;
            if (auto v = r.text(s, "output_path", path, std::string())) sim.output_path = *v;
            if (auto v = r.text(s, "initial", path, std::string("steady"))) {
                if (*v == "steady") sim.initial = SimulationConfig::Initial::steady;
                else if (*v == "uniform") sim.initial = SimulationConfig::Initial::uniform;
                else r.problem(path + ".initial", "expected 'steady' or 'uniform'");
            }
        }
    }
    const auto& sim = cfg.simulation;
    if (!(sim.dt > 0.0)) r.problem("$.simulation.dt", "must be positive");
    if (!(sim.t_end >= 0.0)) r.problem("$.simulation.t_end", "must be non-negative");
    if (!(sim.dx_target > 0.0)) r.problem("$.simulation.dx_target", "must be positive");
    if (!(sim.cfl_safety > 0.0 && sim.cfl_safety <= 1.0)) r.problem("$.simulation.cfl_safety", "must lie in (0, 1]");
    if (!(sim.output_cadence > 0.0)) r.problem("$.simulation.output_cadence", "must be positive");

    // Topology and physical ranges are the network's own rules.
    if (structural) {
        try {
            Network(cfg.network, cfg.eos, sim.dx_target > 0.0 ? sim.dx_target : 1.0);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::validation && e.kind() != ErrorKind::domain) throw;
            std::istringstream lines(e.what());
            std::string line;
            bool any = false;
            while (std::getline(lines, line)) {
                const auto pos = line.find("- ");
                if (pos != std::string::npos && line.find_first_not_of(' ') == pos) {
                    r.problem("$.network", line.substr(pos + 2));
                    any = true;
                }
            }
            if (!any) r.problem("$.network", e.what());
        }
    }

    if (!problems.empty()) fail(ErrorKind::validation, join_problems(origin, problems));
    return cfg;
}

NetworkConfig load_config(const std::string& path, bool strict) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) fail(ErrorKind::io, "cannot read config '" + path + "'");
    return parse_config(buf.str(), strict, path);
}

json profile_to_json(const TimeProfile& profile) {
    json j = std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, TimeProfile::Constant>) {
                return {{"type", "constant"}, {"value", v.value}};
            } else if constexpr (std::is_same_v<T, TimeProfile::Harmonic>) {
                json h{{"type", "harmonic"},     {"offset", v.offset},
                       {"amplitude", v.amplitude}, {"omega", v.omega},
                       {"phase", v.phase},         {"form", v.relative ? "relative" : "affine"},
                       {"wave", v.cosine ? "cos" : "sin"}};
                if (v.start) h["start"] = *v.start;
                return h;
            } else if constexpr (std::is_same_v<T, TimeProfile::PiecewiseLinear>) {
                json k = json::array();
                for (const auto& [t, x] : v.knots) k.push_back({t, x});
                return {{"type", "piecewise_linear"}, {"knots", k}};
            } else {
                json k = json::array();
                for (const auto& [t, x] : v.intervals) k.push_back({t, x});
                return {{"type", "step_sequence"}, {"intervals", k}};
            }
        },
        profile.variant());
    if (profile.period()) j["period"] = *profile.period();
    return j;
}

json eos_to_json(const EosModel& eos) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, EosModel::Ideal>) {
                return {{"model", "ideal"}, {"wave_speed", v.wave_speed}};
            } else if constexpr (std::is_same_v<T, EosModel::CngaIsothermal>) {
                return {{"model", "cnga"}, {"b1", v.b1}, {"b2", v.b2}, {"RT", v.rt}};
            } else if constexpr (std::is_same_v<T, EosModel::CngaDetailed>) {
                return {{"model", "cnga_detailed"}, {"T_kelvin", v.temperature}, {"gas_gravity", v.gravity}};
            } else {
                return {{"model", "cnga_nonisothermal"},
                        {"T_ambient", v.profile.ambient},
                        {"T_jump", v.profile.jump},
                        {"decay_rate", v.profile.decay_rate},
                        {"gas_gravity", v.gravity}};
            }
        },
        eos.variant());
}

json config_to_json(const NetworkConfig& cfg) {
    json nodes = json::array();
    for (const auto& n : cfg.network.nodes) {
        nodes.push_back({{"id", n.id}, {"kind", kind_name(n.kind)}, {"profile", profile_to_json(n.profile)}});
    }
    json pipes = json::array();
    for (const auto& p : cfg.network.pipes) {
        pipes.push_back({{"id", p.id},
                         {"from", p.from},
                         {"to", p.to},
                         {"length", p.geometry.length},
                         {"diameter", p.geometry.diameter},
                         {"friction", p.geometry.friction}});
    }
    json comps = json::array();
    for (const auto& c : cfg.network.compressors) {
        comps.push_back({{"id", c.id},
                         {"pipe", c.pipe},
                         {"side", c.side == PipeEnd::inlet ? "inlet" : "outlet"},
                         {"ratio", profile_to_json(c.ratio)}});
    }
    const auto& s = cfg.simulation;
    json sim{{"dt", s.dt},
             {"t_end", s.t_end},
             {"dx_target", s.dx_target},
             {"cfl_safety", s.cfl_safety},
             {"output_cadence", s.output_cadence},
             {"output_path", s.output_path},
             {"initial", s.initial == SimulationConfig::Initial::steady ? "steady" : "uniform"}};
    // nlohmann keeps keys sorted, so the text is canonical
    return {{"schema", cfg.schema}, {"eos", eos_to_json(cfg.eos)}, {"nodes", nodes},
            {"pipes", pipes},       {"compressors", comps},         {"simulation", sim}};
}

std::string serialize_config(const NetworkConfig& config) { return config_to_json(config).dump(2) + "\n"; }

NetworkConfig five_node_config() {
    NetworkConfig cfg;
    cfg.eos = EosModel::cnga();
    cfg.network = five_node_definition(true);
    cfg.simulation.dt = 0.125;
    cfg.simulation.t_end = 86400.0;
    cfg.simulation.dx_target = 62.5;
    cfg.simulation.output_cadence = 60.0;
    cfg.simulation.output_path = "five_node.csv";
    return cfg;
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        fail(ErrorKind::io, "sha256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) fail(ErrorKind::io, "cannot open '" + path + "' for writing");
    out_ << kCsvHeader << '\n';
    flush();
}

void CsvWriter::row(double t, std::string_view entity, std::string_view id, std::string_view field,
                    double value) {
    line_.clear();
    line_ += format_number(t);
    line_ += ',';
    line_ += entity;
    line_ += ',';
    line_ += id;
    line_ += ',';
    line_ += field;
    line_ += ',';
    line_ += format_number(value);
    line_ += '\n';
    out_ << line_;
}

void CsvWriter::flush() {
    out_.flush();
    if (!out_) fail(ErrorKind::io, "write to '" + path_ + "' failed");
}

void write_json(const std::string& path, const json& doc) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot open '" + path + "' for writing");
    out << doc.dump(2) << '\n';
    if (!out) fail(ErrorKind::io, "write to '" + path + "' failed");
}

std::string summary_path_for(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    if (p.extension() == ".csv") p.replace_extension();
    return p.string() + ".summary.json";
}

void apply_overrides(NetworkConfig& cfg, const RunOverrides& o) {
    auto& s = cfg.simulation;
    if (o.dt) s.dt = *o.dt;
    if (o.dx) s.dx_target = *o.dx;
    if (o.t_end) s.t_end = *o.t_end;
    if (o.cadence) s.output_cadence = *o.cadence;
    if (o.cfl_safety) s.cfl_safety = *o.cfl_safety;
    if (o.out) s.output_path = *o.out;
    std::vector<std::string> problems;
    if (!(s.dt > 0.0)) problems.push_back("dt must be positive");
    if (!(s.dx_target > 0.0)) problems.push_back("dx must be positive");
    if (!(s.t_end >= 0.0)) problems.push_back("t_end must be non-negative");
    if (!(s.output_cadence > 0.0)) problems.push_back("cadence must be positive");
    if (!(s.cfl_safety > 0.0 && s.cfl_safety <= 1.0)) problems.push_back("cfl safety must lie in (0, 1]");
    if (!problems.empty()) fail(ErrorKind::validation, join_problems("overrides", problems));
}

Network build_network(const NetworkConfig& cfg) {
    Network net(cfg.network, cfg.eos, cfg.simulation.dx_target);
    if (cfg.simulation.initial == SimulationConfig::Initial::steady) {
        steady_state_solve(net);
        return net;
    }
    double p0 = 0.0;
    for (const auto& n : net.nodes()) {
        if (n.spec.kind == NodeSpec::Kind::slack) {
            p0 = n.spec.profile(0.0);
            break;
        }
    }
    for (auto& e : net.edges()) {
        auto& pipe = e.pipe;
        for (int i = 0; i < pipe.cells(); ++i) pipe.state.rho[i] = pipe.cell_eos[i].density(p0);
        std::fill(pipe.state.phi.begin(), pipe.state.phi.end(), 0.0);
    }
    net.refresh_node_pressures();
    return net;
}

void write_network_sample(CsvWriter& csv, const Network& net, const LedgerSample& ledger) {
    const double t = ledger.t;
    for (const auto& n : net.nodes()) {
        csv.row(t, "node", n.spec.id, "pressure", n.pressure);
        csv.row(t, "node", n.spec.id, "injection", n.injection);
    }
    for (const auto& e : net.edges()) {
        const auto& p = e.pipe;
        csv.row(t, "pipe", e.spec.id, "pressure_in", p.boundary_pressure(Side::left));
        csv.row(t, "pipe", e.spec.id, "pressure_out", p.boundary_pressure(Side::right));
        csv.row(t, "pipe", e.spec.id, "flow_in", p.geometry.area() * p.boundary_flux(Side::left));
        csv.row(t, "pipe", e.spec.id, "flow_out", p.geometry.area() * p.boundary_flux(Side::right));
        csv.row(t, "pipe", e.spec.id, "mass", total_mass(p));
    }
    csv.row(t, "ledger", "network", "mass", ledger.mass);
    csv.row(t, "ledger", "network", "throughput", ledger.throughput);
    csv.row(t, "ledger", "network", "discrepancy", ledger.discrepancy);
    csv.flush();
}

RunOutcome run_config(const NetworkConfig& cfg, bool parallel) {
    auto net = build_network(cfg);
    return continue_run(net, cfg, parallel);
}

RunOutcome continue_run(Network& net, const NetworkConfig& cfg, bool parallel) {
    const auto& s = cfg.simulation;
    RunOutcome outcome;
    outcome.csv_path = s.output_path.empty() ? "run.csv" : s.output_path;
    outcome.summary_path = summary_path_for(outcome.csv_path);
    outcome.config_sha = sha256_hex(serialize_config(cfg));

    CsvWriter csv(outcome.csv_path);
    RunOptions run;
    run.dt = s.dt;
    run.t_end = s.t_end;
    run.cadence = s.output_cadence;
    run.cfl_safety = s.cfl_safety;
    run.parallel = parallel;
    const bool empty = step_count(net.time(), s.t_end, s.dt) == 0;
    outcome.summary = run_network(net, run, [&](const Network& n, const LedgerSample& l) {
        if (!empty) write_network_sample(csv, n, l);
    });
    csv.flush();

    json summary{{"config_sha", outcome.config_sha},
                 {"steps", outcome.summary.steps},
                 {"max_ledger_discrepancy_kg", outcome.summary.max_ledger_discrepancy},
                 {"wall_seconds", outcome.summary.wall_seconds},
                 {"samples", empty ? 0 : outcome.summary.samples},
                 {"initial_mass_kg", outcome.summary.initial_mass},
                 {"dt", s.dt},
                 {"t_end", s.t_end},
                 {"csv", outcome.csv_path}};
    write_json(outcome.summary_path, summary);
    return outcome;
}

void write_boundary_series(const BoundarySeries& series, const std::string& csv_path) {
    CsvWriter csv(csv_path);
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        const double t = series.t[i];
        for (const auto& [id, s] : {std::pair{"left", &series.left[i]}, std::pair{"right", &series.right[i]}}) {
            csv.row(t, "boundary", id, "pressure", s->p);
            csv.row(t, "boundary", id, "density", s->rho);
            csv.row(t, "boundary", id, "flux", s->phi);
            csv.row(t, "boundary", id, "velocity", s->v);
        }
    }
    csv.flush();
}

json transient_summary(const TransientReport& r, const TransientOptions& o) {
    json setup{{"scenario", r.scenario}, {"eos", r.eos}, {"dx", r.dx},
               {"dt", r.dt},             {"t_end", r.series.t.empty() ? 0.0 : r.series.t.back()},
               {"cadence", o.cadence},   {"cfl_safety", o.cfl_safety}};
    double v_left = 0.0, v_right = 0.0;
    for (const auto& s : r.series.left) v_left = std::max(v_left, std::abs(s.v));
    for (const auto& s : r.series.right) v_right = std::max(v_right, std::abs(s.v));
    return {{"config_sha", sha256_hex(setup.dump())},
            {"steps", r.run.steps},
            {"max_ledger_discrepancy_kg", r.run.max_ledger_discrepancy},
            {"wall_seconds", r.run.wall_seconds},
            {"setup", setup},
            {"max_abs_velocity_left", v_left},
            {"max_abs_velocity_right", v_right}};
}

json convergence_to_json(const ConvergenceReport& r) {
    json levels = json::array();
    for (std::size_t i = 0; i < r.dt.size(); ++i) {
        levels.push_back({{"dt", r.dt[i]},
                          {"cells", r.cells[i]},
                          {"error_rho", r.errors[0][i]},
                          {"error_p", r.errors[1][i]},
                          {"error_phi", r.errors[2][i]}});
    }
    json rates;
    for (std::size_t v = 0; v < 3; ++v) {
        rates[ConvergenceReport::variables[v]] = {{"last_two", r.rates[v].last_two},
                                                  {"endpoint", r.rates[v].endpoint}};
    }
    // reference rates: rho and p 2.04 (last two) and 2.24 (endpoint), +-0.15; phi at least 2.5
    auto within = [](double v, double target) { return std::abs(v - target) <= 0.15; };
    json checks;
    checks["rho_last_two"] = within(r.rates[0].last_two, 2.04);
    checks["p_last_two"] = within(r.rates[1].last_two, 2.04);
    checks["rho_endpoint"] = within(r.rates[0].endpoint, 2.24);
    checks["p_endpoint"] = within(r.rates[1].endpoint, 2.24);
    checks["phi_last_two"] = r.rates[2].last_two >= 2.5;
    checks["phi_endpoint"] = r.rates[2].endpoint >= 2.5;
    bool all = true;
    for (const auto& [k, v] : checks.items()) all = all && v.get<bool>();
    checks["all"] = all;
    return {{"levels", levels}, {"rates", rates}, {"checks", checks}};
}

json steady_to_json(const Network& net, const SteadyResult& r) {
    json nodes = json::array();
    for (std::size_t n = 0; n < net.nodes().size(); ++n) {
        nodes.push_back({{"id", net.nodes()[n].spec.id}, {"pressure", r.node_pressure[n]}});
    }
    json pipes = json::array();
    for (std::size_t e = 0; e < net.edges().size(); ++e) {
        pipes.push_back({{"id", net.edges()[e].spec.id},
                         {"flow", r.pipe_flow[e]},
                         {"pressure_in", r.pipe_inlet_pressure[e]},
                         {"pressure_out", r.pipe_outlet_pressure[e]}});
    }
    return {{"nodes", nodes}, {"pipes", pipes}, {"iterations", r.iterations}, {"max_residual_kg_s", r.max_residual}};
}

} // namespace gasnet
