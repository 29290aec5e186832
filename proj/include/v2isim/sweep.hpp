#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "v2isim/config.hpp"
#include "v2isim/metrics.hpp"

namespace v2isim {

// One (scenario, tech) case of a sweep.
struct SweepCase {
    Scenario scenario = Scenario::UMi;
    Tech tech = Tech::Lte;
};

// Cartesian sweep: cases x densities x rates, n_runs runs each.
struct SweepSpec {
    std::vector<SweepCase> cases;
    std::vector<double> densities_per_km2;
    std::vector<double> rates_bps;
    int n_runs = 10;
    double run_duration_s = 10.0;
    double warmup_s = 1.0;
    std::uint64_t seed = 1;
    std::string output_path = "results.csv";
};

SweepSpec sweep_from_json(const std::string& text);
SweepSpec load_sweep_file(const std::string& path);

// Campaign point results ready for CSV emission.
struct CampaignSummary {
    ScenarioConfig config;
    MetricsReport report;
};

// Builds the config of one sweep point from its case, density and rate.
ScenarioConfig sweep_point_config(const SweepSpec& spec, const SweepCase& c, double density,
                                  double rate_bps);

// Runs every point of the sweep in grid order.
std::vector<CampaignSummary> run_sweep(const SweepSpec& spec, int parallel = 1,
                                       const std::function<void(const ScenarioConfig&)>& on_point = {});

// Deterministic metrics CSV: a versioned header, then one row per
// (scenario, tech, density, rate, metric) with fixed decimal formatting.
void write_metrics_csv(std::ostream& out, std::span<const CampaignSummary> campaigns);

}  // namespace v2isim
