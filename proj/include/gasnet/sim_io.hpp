#pragma once

#include "gasnet/eos.hpp"
#include "gasnet/experiments.hpp"
#include "gasnet/network.hpp"
#include "gasnet/simulation.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <string>
#include <string_view>

namespace gasnet {

inline constexpr const char* kSchemaVersion = "v1";
inline constexpr const char* kCsvHeader = "t,entity,id,field,value";

struct SimulationConfig {
    enum class Initial { steady, uniform };
    double dt = 0.125;           // s
    double t_end = 3600.0;       // s
    double dx_target = 100.0;    // m
    double cfl_safety = 0.9;
    double output_cadence = 60.0;  // s
    std::string output_path;     // CSV file; empty means "<name>.csv" chosen by the caller
    Initial initial = Initial::steady;
    bool operator==(const SimulationConfig&) const = default;
};

struct NetworkConfig {
    std::string schema = kSchemaVersion;
    EosModel eos = EosModel::cnga();
    NetworkDefinition network;
    SimulationConfig simulation;
    bool operator==(const NetworkConfig&) const = default;
};

// Parses and validates a config document. Every violation is collected into
// one ErrorKind::validation error; syntax errors report line and column. In
// strict mode unknown keys are violations too.
NetworkConfig parse_config(std::string_view text, bool strict = false,
                           const std::string& origin = "<config>");
// Reads a file (ErrorKind::io on failure) and parses it.
NetworkConfig load_config(const std::string& path, bool strict = false);

nlohmann::json config_to_json(const NetworkConfig& config);
std::string serialize_config(const NetworkConfig& config);

nlohmann::json profile_to_json(const TimeProfile& profile);
nlohmann::json eos_to_json(const EosModel& eos);

// The five-node example with its daily schedules and the production grid.
NetworkConfig five_node_config();

// Hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

// Long-format CSV: t,entity,id,field,value. The header is written on open.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void row(double t, std::string_view entity, std::string_view id, std::string_view field,
             double value);
    void flush();
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
    std::ofstream out_;
    std::string line_;
};

void write_json(const std::string& path, const nlohmann::json& doc);

// "<stem>.summary.json" next to a CSV path.
std::string summary_path_for(const std::string& csv_path);

struct RunOverrides {
    std::optional<double> dt, dx, t_end, cadence, cfl_safety;
    std::optional<std::string> out;
    bool parallel = false;
};

void apply_overrides(NetworkConfig& config, const RunOverrides& overrides);

// Builds the network and its initial state (steady solve or uniform slack
// pressure at rest).
Network build_network(const NetworkConfig& config);

struct RunOutcome {
    RunSummary summary;
    std::string csv_path;
    std::string summary_path;
    std::string config_sha;
};

// Runs a config end to end, streaming the CSV and writing the summary.
RunOutcome run_config(const NetworkConfig& config, bool parallel = false);

// Steps an existing network from its current time to the configured t_end,
// with the same outputs as run_config.
RunOutcome continue_run(Network& network, const NetworkConfig& config, bool parallel = false);

// Appends the per-sample network rows (nodes, pipes, ledger).
void write_network_sample(CsvWriter& csv, const Network& network, const LedgerSample& ledger);

// Boundary series of a single-pipe experiment.
void write_boundary_series(const BoundarySeries& series, const std::string& csv_path);

nlohmann::json transient_summary(const TransientReport& report, const TransientOptions& options);
nlohmann::json convergence_to_json(const ConvergenceReport& report);
nlohmann::json steady_to_json(const Network& network, const SteadyResult& result);

} // namespace gasnet
