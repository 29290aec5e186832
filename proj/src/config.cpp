#include "v2isim/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace v2isim {

namespace {

using nlohmann::json;

std::string issue_text(const char* what, double value) {
    std::ostringstream os;
    os << what << " (got " << value << ")";
    return os.str();
}

}  // namespace

const char* to_string(Scenario s) noexcept {
    return s == Scenario::UMi ? "umi" : "rma";
}

const char* to_string(Tech t) noexcept {
    return t == Tech::Lte ? "lte" : "mmwave";
}

const char* to_string(Scheduler s) noexcept {
    return s == Scheduler::RoundRobin ? "round_robin" : "equal_throughput";
}

bool parse_scenario(std::string_view text, Scenario& out) noexcept {
    if (text == "umi" || text == "UMi") {
        out = Scenario::UMi;
        return true;
    }
    if (text == "rma" || text == "RMa") {
        out = Scenario::RMa;
        return true;
    }
    return false;
}

bool parse_tech(std::string_view text, Tech& out) noexcept {
    if (text == "lte" || text == "LTE") {
        out = Tech::Lte;
        return true;
    }
    if (text == "mmwave" || text == "mmWave") {
        out = Tech::MmWave;
        return true;
    }
    return false;
}

bool parse_scheduler(std::string_view text, Scheduler& out) noexcept {
    if (text == "round_robin") {
        out = Scheduler::RoundRobin;
        return true;
    }
    if (text == "equal_throughput") {
        out = Scheduler::EqualThroughput;
        return true;
    }
    return false;
}

ScenarioConfig default_config(Scenario scenario, Tech tech) {
    ScenarioConfig cfg;
    cfg.scenario = scenario;
    cfg.tech = tech;
    if (tech == Tech::Lte) {
        cfg.carrier_hz = 2.0e9;
        cfg.bandwidth_hz = 20.0e6;
        cfg.enb_array = {1, 1};
        cfg.vehicle_array = {1, 1};
    } else {
        cfg.carrier_hz = 28.0e9;
        cfg.bandwidth_hz = 1.0e9;
        cfg.enb_array = {8, 8};
        cfg.vehicle_array = {4, 4};
    }
    cfg.vehicle_speed_mps = scenario == Scenario::UMi ? 8.33 : 33.3;
    return cfg;
}

double interarrival_s(const ScenarioConfig& cfg) noexcept {
    return 8.0 * static_cast<double>(cfg.packet_size_bytes) / cfg.app_rate_bps;
}

const char* to_string(ConfigError e) noexcept {
    switch (e) {
        case ConfigError::NonPositiveArea: return "NonPositiveArea";
        case ConfigError::NonPositiveDensity: return "NonPositiveDensity";
        case ConfigError::NegativeVehiclesPerEnb: return "NegativeVehiclesPerEnb";
        case ConfigError::NonPositiveCarrier: return "NonPositiveCarrier";
        case ConfigError::NonPositiveBandwidth: return "NonPositiveBandwidth";
        case ConfigError::NegativeNoiseFigure: return "NegativeNoiseFigure";
        case ConfigError::NonPositivePacketSize: return "NonPositivePacketSize";
        case ConfigError::NonPositiveRate: return "NonPositiveRate";
        case ConfigError::NonPositiveBuffer: return "NonPositiveBuffer";
        case ConfigError::NegativeReorderDelay: return "NegativeReorderDelay";
        case ConfigError::NonPositiveRuns: return "NonPositiveRuns";
        case ConfigError::NonPositiveDuration: return "NonPositiveDuration";
        case ConfigError::NegativeWarmup: return "NegativeWarmup";
        case ConfigError::WarmupExceedsDuration: return "WarmupExceedsDuration";
        case ConfigError::NegativeSpeed: return "NegativeSpeed";
        case ConfigError::NonPositiveArray: return "NonPositiveArray";
        case ConfigError::LteWithArray: return "LteWithArray";
        case ConfigError::MmWaveWithoutArray: return "MmWaveWithoutArray";
    }
    return "Unknown";
}

std::vector<ValidationIssue> validate(const ScenarioConfig& cfg) {
    std::vector<ValidationIssue> issues;
    auto add = [&issues](ConfigError code, std::string message) {
        issues.push_back({code, std::move(message)});
    };

    if (!(cfg.area_side_m > 0.0)) {
        add(ConfigError::NonPositiveArea, issue_text("area_side_m must be > 0", cfg.area_side_m));
    }
    if (!(cfg.enb_density_per_km2 > 0.0)) {
        add(ConfigError::NonPositiveDensity,
            issue_text("enb_density_per_km2 must be > 0", cfg.enb_density_per_km2));
    }
    if (cfg.vehicles_per_enb < 0) {
        add(ConfigError::NegativeVehiclesPerEnb,
            issue_text("vehicles_per_enb must be >= 0", cfg.vehicles_per_enb));
    }
    if (!(cfg.carrier_hz > 0.0)) {
        add(ConfigError::NonPositiveCarrier, issue_text("carrier_hz must be > 0", cfg.carrier_hz));
    }
    if (!(cfg.bandwidth_hz > 0.0)) {
        add(ConfigError::NonPositiveBandwidth,
            issue_text("bandwidth_hz must be > 0", cfg.bandwidth_hz));
    }
    if (cfg.noise_figure_db < 0.0) {
        add(ConfigError::NegativeNoiseFigure,
            issue_text("noise_figure_db must be >= 0", cfg.noise_figure_db));
    }
    if (cfg.packet_size_bytes <= 0) {
        add(ConfigError::NonPositivePacketSize,
            issue_text("packet_size_bytes must be > 0", cfg.packet_size_bytes));
    }
    if (!(cfg.app_rate_bps > 0.0)) {
        add(ConfigError::NonPositiveRate, issue_text("app_rate_bps must be > 0", cfg.app_rate_bps));
    }
    if (!(cfg.rlc_buffer_bytes > 0.0)) {
        add(ConfigError::NonPositiveBuffer,
            issue_text("rlc_buffer_bytes must be > 0", cfg.rlc_buffer_bytes));
    }
    if (cfg.rlc_reorder_delay_s < 0.0) {
        add(ConfigError::NegativeReorderDelay,
            issue_text("rlc_reorder_delay_s must be >= 0", cfg.rlc_reorder_delay_s));
    }
    if (cfg.n_runs <= 0) {
        add(ConfigError::NonPositiveRuns, issue_text("n_runs must be > 0", cfg.n_runs));
    }
    if (!(cfg.run_duration_s > 0.0)) {
        add(ConfigError::NonPositiveDuration,
            issue_text("run_duration_s must be > 0", cfg.run_duration_s));
    }
    if (cfg.warmup_s < 0.0) {
        add(ConfigError::NegativeWarmup, issue_text("warmup_s must be >= 0", cfg.warmup_s));
    } else if (cfg.warmup_s >= cfg.run_duration_s) {
        // Equality leaves a zero-length measurement window.
        add(ConfigError::WarmupExceedsDuration,
            issue_text("warmup_s must be less than run_duration_s", cfg.warmup_s));
    }
    if (cfg.vehicle_speed_mps < 0.0) {
        add(ConfigError::NegativeSpeed,
            issue_text("vehicle_speed_mps must be >= 0", cfg.vehicle_speed_mps));
    }
    if (cfg.enb_array.rows <= 0 || cfg.enb_array.cols <= 0 || cfg.vehicle_array.rows <= 0 ||
        cfg.vehicle_array.cols <= 0) {
        add(ConfigError::NonPositiveArray, "array dimensions must be positive");
    } else if (cfg.tech == Tech::Lte) {
        if (cfg.enb_array.elements() > 1 || cfg.vehicle_array.elements() > 1) {
            add(ConfigError::LteWithArray,
                "lte runs omnidirectional; arrays must be 1x1 on both ends");
        }
    } else {
        if (cfg.enb_array.elements() <= 1 || cfg.vehicle_array.elements() <= 1) {
            add(ConfigError::MmWaveWithoutArray,
                "mmwave requires more than one element on both ends");
        }
    }
    return issues;
}

std::string to_json_string(const ScenarioConfig& cfg) {
    json j;
    j["scenario"] = to_string(cfg.scenario);
    j["tech"] = to_string(cfg.tech);
    j["area_side_m"] = cfg.area_side_m;
    j["enb_density_per_km2"] = cfg.enb_density_per_km2;
    j["vehicles_per_enb"] = cfg.vehicles_per_enb;
    j["carrier_hz"] = cfg.carrier_hz;
    j["bandwidth_hz"] = cfg.bandwidth_hz;
    j["tx_power_dbm"] = cfg.tx_power_dbm;
    j["noise_figure_db"] = cfg.noise_figure_db;
    j["enb_array"] = {cfg.enb_array.rows, cfg.enb_array.cols};
    j["vehicle_array"] = {cfg.vehicle_array.rows, cfg.vehicle_array.cols};
    j["packet_size_bytes"] = cfg.packet_size_bytes;
    j["app_rate_bps"] = cfg.app_rate_bps;
    j["rlc_buffer_bytes"] = cfg.rlc_buffer_bytes;
    j["rlc_reorder_delay_s"] = cfg.rlc_reorder_delay_s;
    j["scheduler"] = to_string(cfg.scheduler);
    j["n_runs"] = cfg.n_runs;
    j["run_duration_s"] = cfg.run_duration_s;
    j["warmup_s"] = cfg.warmup_s;
    j["vehicle_speed_mps"] = cfg.vehicle_speed_mps;
    j["master_seed"] = cfg.master_seed;
    j["fading_iid"] = cfg.fading_iid;
    return j.dump(2);
}

ScenarioConfig config_from_json(const std::string& text) {
    json j = json::parse(text);

    Scenario scenario = Scenario::UMi;
    Tech tech = Tech::Lte;
    if (j.contains("scenario") &&
        !parse_scenario(j.at("scenario").get<std::string>(), scenario)) {
        throw std::invalid_argument("unknown scenario: " + j.at("scenario").dump());
    }
    if (j.contains("tech") && !parse_tech(j.at("tech").get<std::string>(), tech)) {
        throw std::invalid_argument("unknown tech: " + j.at("tech").dump());
    }

    ScenarioConfig cfg = default_config(scenario, tech);
    auto get = [&j](const char* key, auto& field) {
        if (j.contains(key)) {
            field = j.at(key).get<std::decay_t<decltype(field)>>();
        }
    };
    get("area_side_m", cfg.area_side_m);
    get("enb_density_per_km2", cfg.enb_density_per_km2);
    get("vehicles_per_enb", cfg.vehicles_per_enb);
    get("carrier_hz", cfg.carrier_hz);
    get("bandwidth_hz", cfg.bandwidth_hz);
    get("tx_power_dbm", cfg.tx_power_dbm);
    get("noise_figure_db", cfg.noise_figure_db);
    if (j.contains("enb_array")) {
        auto a = j.at("enb_array").get<std::vector<int>>();
        if (a.size() != 2) throw std::invalid_argument("enb_array must be [rows, cols]");
        cfg.enb_array = {a[0], a[1]};
    }
    if (j.contains("vehicle_array")) {
        auto a = j.at("vehicle_array").get<std::vector<int>>();
        if (a.size() != 2) throw std::invalid_argument("vehicle_array must be [rows, cols]");
        cfg.vehicle_array = {a[0], a[1]};
    }
    get("packet_size_bytes", cfg.packet_size_bytes);
    get("app_rate_bps", cfg.app_rate_bps);
    get("rlc_buffer_bytes", cfg.rlc_buffer_bytes);
    get("rlc_reorder_delay_s", cfg.rlc_reorder_delay_s);
    if (j.contains("scheduler") &&
        !parse_scheduler(j.at("scheduler").get<std::string>(), cfg.scheduler)) {
        throw std::invalid_argument("unknown scheduler: " + j.at("scheduler").dump());
    }
    get("n_runs", cfg.n_runs);
    get("run_duration_s", cfg.run_duration_s);
    get("warmup_s", cfg.warmup_s);
    get("vehicle_speed_mps", cfg.vehicle_speed_mps);
    get("master_seed", cfg.master_seed);
    get("fading_iid", cfg.fading_iid);
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return config_from_json(buffer.str());
}

}  // namespace v2isim
