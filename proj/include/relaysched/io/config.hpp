#pragma once

#include "relaysched/analytic.hpp"
#include "relaysched/flow.hpp"
#include "relaysched/montecarlo.hpp"
#include "relaysched/radio.hpp"
#include "relaysched/relay_sim.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <string>
#include <vector>

namespace relaysched::io {

/// Invalid configuration. `line` is 1-based, or 0 when unknown.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, int line = 0);
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Parsed JSON document plus the source line of every value, keyed by JSON
/// pointer, for error messages.
struct ConfigDocument {
    nlohmann::json root;
    std::string source_name;
    std::unordered_map<std::string, int> lines;

    int line_of(const std::string& pointer) const;
};

/// Throws ConfigError with the line and column of the first syntax error.
ConfigDocument parse_config(const std::string& text, const std::string& source_name);
ConfigDocument load_config_file(const std::string& path);

/// Population, phase split and solver settings shared by solve, sweep and mc.
struct ModelConfig {
    std::vector<FlowSpec> flows;
    /// Absent means a single-phase system without relay timing.
    std::optional<RelayPhaseConfig> phase;
    double beta = 1.0;
    analytic::SolverOptions solver;
};

struct SweepConfig {
    analytic::SweepParameter parameter = analytic::SweepParameter::Beta;
    std::vector<double> values;
};

struct MonteCarloSettings {
    long long slots = 1'000'000;
    double epsilon = 1e-3;
    std::uint64_t seed = 1;
    mc::Policy policy = mc::Policy::IncentivizedPF;
    long long trace_every = 0;
};

struct SolveJob {
    ModelConfig model;
};

struct SweepJob {
    ModelConfig model;
    SweepConfig sweep;
};

struct McJob {
    ModelConfig model;
    MonteCarloSettings mc;
};

struct SimJob {
    sim::ScenarioConfig scenario;
    double balance_tolerance = 0.05;
};

struct CompareJob {
    sim::ScenarioConfig scenario;
    sim::SubframePlan plan_a;
    sim::SubframePlan plan_b;
    double tie_tolerance = 0.01;
};

struct MapJob {
    radio::NodeGeometry geometry;
    radio::RasterSpec raster;
};

SolveJob load_solve_job(const ConfigDocument& doc);
SweepJob load_sweep_job(const ConfigDocument& doc);
McJob load_mc_job(const ConfigDocument& doc);
SimJob load_sim_job(const ConfigDocument& doc);
CompareJob load_compare_job(const ConfigDocument& doc);
MapJob load_map_job(const ConfigDocument& doc);

/// Fully resolved configuration with defaults filled in, for manifests.
nlohmann::json to_json(const SolveJob& job);
nlohmann::json to_json(const SweepJob& job);
nlohmann::json to_json(const McJob& job);
nlohmann::json to_json(const SimJob& job);
nlohmann::json to_json(const CompareJob& job);
nlohmann::json to_json(const MapJob& job);

/// Evenly spaced (linear or logarithmic) sweep values, endpoints included.
std::vector<double> spaced_values(double from, double to, int points, bool logarithmic);

} // namespace relaysched::io
