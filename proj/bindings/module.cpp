#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "v2isim/channel.hpp"
#include "v2isim/config.hpp"
#include "v2isim/engine.hpp"
#include "v2isim/geometry.hpp"
#include "v2isim/metrics.hpp"
#include "v2isim/radio.hpp"
#include "v2isim/sweep.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Vehicle-to-infrastructure downlink simulator core";

    py::enum_<v2isim::Scenario>(m, "Scenario")
        .value("UMi", v2isim::Scenario::UMi)
        .value("RMa", v2isim::Scenario::RMa);
    py::enum_<v2isim::Tech>(m, "Tech")
        .value("Lte", v2isim::Tech::Lte)
        .value("MmWave", v2isim::Tech::MmWave);
    py::enum_<v2isim::Scheduler>(m, "Scheduler")
        .value("RoundRobin", v2isim::Scheduler::RoundRobin)
        .value("EqualThroughput", v2isim::Scheduler::EqualThroughput);

    py::class_<v2isim::ArrayGeometry>(m, "ArrayGeometry")
        .def(py::init<>())
        .def(py::init([](int rows, int cols) {
                 return v2isim::ArrayGeometry{rows, cols};
             }),
             py::arg("rows"), py::arg("cols"))
        .def_readwrite("rows", &v2isim::ArrayGeometry::rows)
        .def_readwrite("cols", &v2isim::ArrayGeometry::cols)
        .def("elements", &v2isim::ArrayGeometry::elements);

    py::class_<v2isim::ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("scenario", &v2isim::ScenarioConfig::scenario)
        .def_readwrite("tech", &v2isim::ScenarioConfig::tech)
        .def_readwrite("area_side_m", &v2isim::ScenarioConfig::area_side_m)
        .def_readwrite("enb_density_per_km2", &v2isim::ScenarioConfig::enb_density_per_km2)
        .def_readwrite("vehicles_per_enb", &v2isim::ScenarioConfig::vehicles_per_enb)
        .def_readwrite("carrier_hz", &v2isim::ScenarioConfig::carrier_hz)
        .def_readwrite("bandwidth_hz", &v2isim::ScenarioConfig::bandwidth_hz)
        .def_readwrite("tx_power_dbm", &v2isim::ScenarioConfig::tx_power_dbm)
        .def_readwrite("noise_figure_db", &v2isim::ScenarioConfig::noise_figure_db)
        .def_readwrite("enb_array", &v2isim::ScenarioConfig::enb_array)
        .def_readwrite("vehicle_array", &v2isim::ScenarioConfig::vehicle_array)
        .def_readwrite("packet_size_bytes", &v2isim::ScenarioConfig::packet_size_bytes)
        .def_readwrite("app_rate_bps", &v2isim::ScenarioConfig::app_rate_bps)
        .def_readwrite("rlc_buffer_bytes", &v2isim::ScenarioConfig::rlc_buffer_bytes)
        .def_readwrite("rlc_reorder_delay_s", &v2isim::ScenarioConfig::rlc_reorder_delay_s)
        .def_readwrite("scheduler", &v2isim::ScenarioConfig::scheduler)
        .def_readwrite("n_runs", &v2isim::ScenarioConfig::n_runs)
        .def_readwrite("run_duration_s", &v2isim::ScenarioConfig::run_duration_s)
        .def_readwrite("warmup_s", &v2isim::ScenarioConfig::warmup_s)
        .def_readwrite("vehicle_speed_mps", &v2isim::ScenarioConfig::vehicle_speed_mps)
        .def_readwrite("master_seed", &v2isim::ScenarioConfig::master_seed)
        .def_readwrite("fading_iid", &v2isim::ScenarioConfig::fading_iid)
        .def("__repr__", [](const v2isim::ScenarioConfig& cfg) {
            return v2isim::to_json_string(cfg);
        });

    m.def("default_config", &v2isim::default_config, py::arg("scenario"), py::arg("tech"));
    m.def("interarrival_s", &v2isim::interarrival_s, py::arg("config"));
    m.def(
        "validate",
        [](const v2isim::ScenarioConfig& cfg) {
            std::vector<std::string> messages;
            for (const auto& issue : v2isim::validate(cfg)) {
                messages.push_back(issue.message);
            }
            return messages;
        },
        py::arg("config"));
    m.def("to_json", &v2isim::to_json_string, py::arg("config"));
    m.def("config_from_json", &v2isim::config_from_json, py::arg("text"));
    m.def("load_config_file", &v2isim::load_config_file, py::arg("path"));

    m.def("los_probability", &v2isim::los_probability, py::arg("scenario"), py::arg("tech"),
          py::arg("distance_m"));
    m.def("path_loss_db", &v2isim::path_loss_db, py::arg("scenario"), py::arg("tech"),
          py::arg("los"), py::arg("distance_m"), py::arg("carrier_hz"));
    m.def("shadowing_sigma_db", &v2isim::shadowing_sigma_db, py::arg("scenario"), py::arg("tech"),
          py::arg("los"));
    m.def("max_doppler_hz", &v2isim::max_doppler_hz, py::arg("speed_mps"), py::arg("carrier_hz"));

    m.def("noise_floor_dbm", &v2isim::noise_floor_dbm, py::arg("bandwidth_hz"),
          py::arg("noise_figure_db"));
    m.def("max_antenna_gain_dbi", &v2isim::max_antenna_gain_dbi, py::arg("tech"),
          py::arg("array"));
    m.def("min_antenna_gain_dbi", &v2isim::min_antenna_gain_dbi, py::arg("tech"),
          py::arg("array"));
    m.def("beam_alignment_probability", &v2isim::beam_alignment_probability, py::arg("array"));
    m.def("link_capacity_bps", &v2isim::link_capacity_bps, py::arg("sinr_db"),
          py::arg("bandwidth_hz"), py::arg("tech"));

    m.def(
        "sample_ppp",
        [](double area_side_m, double density_per_km2, std::uint64_t seed) {
            v2isim::SplitMix64 rng(seed);
            std::vector<std::pair<double, double>> points;
            for (const auto& p : v2isim::sample_ppp(area_side_m, density_per_km2, rng)) {
                points.emplace_back(p.x, p.y);
            }
            return points;
        },
        py::arg("area_side_m"), py::arg("density_per_km2"), py::arg("seed"));

    py::class_<v2isim::VehicleResult>(m, "VehicleResult")
        .def_readonly("generated", &v2isim::VehicleResult::generated)
        .def_readonly("delivered", &v2isim::VehicleResult::delivered)
        .def_readonly("dropped", &v2isim::VehicleResult::dropped)
        .def_readonly("queued_end", &v2isim::VehicleResult::queued_end)
        .def_readonly("in_flight_end", &v2isim::VehicleResult::in_flight_end)
        .def_readonly("delivered_bytes_window", &v2isim::VehicleResult::delivered_bytes_window)
        .def_readonly("delivered_window", &v2isim::VehicleResult::delivered_window)
        .def_readonly("dropped_window", &v2isim::VehicleResult::dropped_window)
        .def_readonly("latency_sum_window_s", &v2isim::VehicleResult::latency_sum_window_s)
        .def_readonly("serving_enb_end", &v2isim::VehicleResult::serving_enb_end);

    py::class_<v2isim::RunResult>(m, "RunResult")
        .def_readonly("run_index", &v2isim::RunResult::run_index)
        .def_readonly("seed", &v2isim::RunResult::seed)
        .def_readonly("window_s", &v2isim::RunResult::window_s)
        .def_readonly("n_enbs", &v2isim::RunResult::n_enbs)
        .def_readonly("vehicles", &v2isim::RunResult::vehicles)
        .def_readonly("wall_s", &v2isim::RunResult::wall_s);

    m.def(
        "run_once",
        [](const v2isim::ScenarioConfig& cfg, int run_index) {
            return v2isim::run_once(cfg, run_index);
        },
        py::arg("config"), py::arg("run_index") = 0,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "run_campaign",
        [](const v2isim::ScenarioConfig& cfg, int n_runs, int parallel) {
            return v2isim::run_campaign(cfg, n_runs, parallel);
        },
        py::arg("config"), py::arg("n_runs"), py::arg("parallel") = 1,
        py::call_guard<py::gil_scoped_release>());

    py::class_<v2isim::Aggregate>(m, "Aggregate")
        .def_readonly("mean", &v2isim::Aggregate::mean)
        .def_readonly("ci95", &v2isim::Aggregate::ci95)
        .def_readonly("per_run", &v2isim::Aggregate::per_run);

    py::class_<v2isim::MetricsReport>(m, "MetricsReport")
        .def_readonly("avg_throughput_bps", &v2isim::MetricsReport::avg_throughput_bps)
        .def_readonly("total_throughput_bps", &v2isim::MetricsReport::total_throughput_bps)
        .def_readonly("p5_throughput_bps", &v2isim::MetricsReport::p5_throughput_bps)
        .def_readonly("p10_throughput_bps", &v2isim::MetricsReport::p10_throughput_bps)
        .def_readonly("avg_latency_s", &v2isim::MetricsReport::avg_latency_s)
        .def_readonly("jain", &v2isim::MetricsReport::jain);

    m.def(
        "compute_report",
        [](const std::vector<v2isim::RunResult>& runs) {
            return v2isim::compute_report(runs);
        },
        py::arg("runs"));
    m.def(
        "jain_index",
        [](const std::vector<double>& throughputs) { return v2isim::jain_index(throughputs); },
        py::arg("throughputs"));
    m.def(
        "lower_percentile_mean",
        [](const std::vector<double>& values, double q) {
            return v2isim::lower_percentile_mean(values, q);
        },
        py::arg("values"), py::arg("q"));

    py::class_<v2isim::SweepCase>(m, "SweepCase")
        .def(py::init<>())
        .def_readwrite("scenario", &v2isim::SweepCase::scenario)
        .def_readwrite("tech", &v2isim::SweepCase::tech);

    py::class_<v2isim::SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("cases", &v2isim::SweepSpec::cases)
        .def_readwrite("densities_per_km2", &v2isim::SweepSpec::densities_per_km2)
        .def_readwrite("rates_bps", &v2isim::SweepSpec::rates_bps)
        .def_readwrite("n_runs", &v2isim::SweepSpec::n_runs)
        .def_readwrite("run_duration_s", &v2isim::SweepSpec::run_duration_s)
        .def_readwrite("warmup_s", &v2isim::SweepSpec::warmup_s)
        .def_readwrite("seed", &v2isim::SweepSpec::seed)
        .def_readwrite("output_path", &v2isim::SweepSpec::output_path);

    py::class_<v2isim::CampaignSummary>(m, "CampaignSummary")
        .def_readonly("config", &v2isim::CampaignSummary::config)
        .def_readonly("report", &v2isim::CampaignSummary::report);

    m.def("sweep_from_json", &v2isim::sweep_from_json, py::arg("text"));
    m.def(
        "run_sweep",
        [](const v2isim::SweepSpec& spec, int parallel) {
            return v2isim::run_sweep(spec, parallel);
        },
        py::arg("spec"), py::arg("parallel") = 1, py::call_guard<py::gil_scoped_release>());
    m.def(
        "run_sweep",
        [](const std::string& sweep_json, int parallel) {
            return v2isim::run_sweep(v2isim::sweep_from_json(sweep_json), parallel);
        },
        py::arg("sweep_json"), py::arg("parallel") = 1,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "metrics_csv",
        [](const std::vector<v2isim::CampaignSummary>& summaries) {
            std::ostringstream out;
            v2isim::write_metrics_csv(out, summaries);
            return out.str();
        },
        py::arg("summaries"));
}
