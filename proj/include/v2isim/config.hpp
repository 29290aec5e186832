#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace v2isim {

enum class Scenario { UMi, RMa };
enum class Tech { Lte, MmWave };

// Downlink scheduling policy applied among the backlogged vehicles of a cell.
// RoundRobin splits each slot equally; EqualThroughput gives the whole slot to
// the vehicle with the least delivered bytes so far (blind equal throughput).
enum class Scheduler { RoundRobin, EqualThroughput };

const char* to_string(Scenario s) noexcept;
const char* to_string(Tech t) noexcept;
const char* to_string(Scheduler s) noexcept;
bool parse_scenario(std::string_view text, Scenario& out) noexcept;
bool parse_tech(std::string_view text, Tech& out) noexcept;
bool parse_scheduler(std::string_view text, Scheduler& out) noexcept;

// Uniform planar antenna array, given as elements per side.
struct ArrayGeometry {
    int rows = 1;
    int cols = 1;

    constexpr int elements() const noexcept { return rows * cols; }
    bool operator==(const ArrayGeometry&) const = default;
};

// Full description of one simulation campaign point. Defaults correspond to
// the UMi / LTE reference setup; use default_config() to get the per-tech
// carrier, bandwidth and array values.
struct ScenarioConfig {
    Scenario scenario = Scenario::UMi;
    Tech tech = Tech::Lte;

    double area_side_m = 500.0;
    double enb_density_per_km2 = 40.0;
    int vehicles_per_enb = 10;

    double carrier_hz = 2.0e9;
    double bandwidth_hz = 20.0e6;
    double tx_power_dbm = 30.0;
    double noise_figure_db = 5.0;
    ArrayGeometry enb_array{1, 1};
    ArrayGeometry vehicle_array{1, 1};

    int packet_size_bytes = 1400;
    double app_rate_bps = 1.0e6;
    double rlc_buffer_bytes = 10.0e6;
    double rlc_reorder_delay_s = 1.0e-3;
    Scheduler scheduler = Scheduler::RoundRobin;

    int n_runs = 10;
    double run_duration_s = 10.0;
    double warmup_s = 1.0;
    double vehicle_speed_mps = 8.33;
    std::uint64_t master_seed = 1;

    // Draws small-scale fading independently per update tick instead of the
    // time-correlated Doppler process. Sensitivity switch, off by default.
    bool fading_iid = false;

    bool operator==(const ScenarioConfig&) const = default;
};

// Reference configuration for a (scenario, tech) pair: carrier, bandwidth,
// arrays and mobility speed set to the values of the corresponding deployment.
ScenarioConfig default_config(Scenario scenario, Tech tech);

// Constant-bit-rate packet spacing, 8 * packet_size / app_rate.
double interarrival_s(const ScenarioConfig& cfg) noexcept;

enum class ConfigError {
    NonPositiveArea,
    NonPositiveDensity,
    NegativeVehiclesPerEnb,
    NonPositiveCarrier,
    NonPositiveBandwidth,
    NegativeNoiseFigure,
    NonPositivePacketSize,
    NonPositiveRate,
    NonPositiveBuffer,
    NegativeReorderDelay,
    NonPositiveRuns,
    NonPositiveDuration,
    NegativeWarmup,
    WarmupExceedsDuration,
    NegativeSpeed,
    NonPositiveArray,
    LteWithArray,
    MmWaveWithoutArray,
};

const char* to_string(ConfigError e) noexcept;

struct ValidationIssue {
    ConfigError code;
    std::string message;
};

// Checks every config invariant; returns one issue per violation, empty when
// the config is usable.
std::vector<ValidationIssue> validate(const ScenarioConfig& cfg);

// JSON round trip. Serialization writes every field; parsing starts from
// default_config(scenario, tech) of the document and overrides the keys that
// are present, so partial files are valid.
std::string to_json_string(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

}  // namespace v2isim
