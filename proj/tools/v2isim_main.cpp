#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "v2isim/engine.hpp"
#include "v2isim/metrics.hpp"
#include "v2isim/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// The CSV appears under its final name only when fully written.
void write_file_atomic(const std::string& path,
                       const std::function<void(std::ostream&)>& body) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp + " for writing");
        }
        body(out);
        out.flush();
        if (!out) {
            throw std::runtime_error("write to " + tmp + " failed");
        }
    }
    std::filesystem::rename(tmp, path);
}

struct TraceFiles {
    std::ofstream topology;
    std::ofstream links;
    std::ofstream packets;
    v2isim::TraceSinks sinks;

    void open(const std::string& kind, const std::string& out_path) {
        const std::string base = out_path + "." + kind + ".csv";
        std::ofstream* stream = nullptr;
        if (kind == "topology") {
            stream = &topology;
            sinks.topology = &topology;
        } else if (kind == "links") {
            stream = &links;
            sinks.links = &links;
        } else {
            stream = &packets;
            sinks.packets = &packets;
        }
        stream->open(base, std::ios::binary | std::ios::trunc);
        if (!*stream) {
            throw std::runtime_error("cannot open " + base + " for writing");
        }
    }
};

int run_single(v2isim::ScenarioConfig cfg, const std::string& out_path, const std::string& trace,
               int parallel) {
    const auto issues = v2isim::validate(cfg);
    if (!issues.empty()) {
        for (const auto& issue : issues) {
            std::cerr << "config error: " << issue.message << "\n";
        }
        return kExitUsage;
    }

    std::vector<v2isim::RunResult> runs;
    if (trace != "none") {
        TraceFiles files;
        files.open(trace, out_path);
        // Tracing pins the traced run; runs stay serial so the files are
        // written once, by run 0.
        runs.reserve(static_cast<std::size_t>(cfg.n_runs));
        for (int i = 0; i < cfg.n_runs; ++i) {
            runs.push_back(v2isim::run_once(cfg, i, i == 0 ? &files.sinks : nullptr));
            std::cerr << "run " << (i + 1) << "/" << cfg.n_runs << " done\n";
        }
    } else {
        runs = v2isim::run_campaign(cfg, cfg.n_runs, parallel, [&](int i) {
            std::cerr << "run " << (i + 1) << "/" << cfg.n_runs << " done\n";
        });
    }

    v2isim::CampaignSummary summary;
    summary.config = cfg;
    summary.report = v2isim::compute_report(runs);
    const std::vector<v2isim::CampaignSummary> summaries{summary};
    write_file_atomic(out_path,
                      [&](std::ostream& out) { v2isim::write_metrics_csv(out, summaries); });
    std::cerr << "wrote " << out_path << "\n";
    return kExitOk;
}

int run_sweep_mode(v2isim::SweepSpec spec, int parallel) {
    for (const auto& c : spec.cases) {
        for (double density : spec.densities_per_km2) {
            for (double rate : spec.rates_bps) {
                const auto cfg = v2isim::sweep_point_config(spec, c, density, rate);
                const auto issues = v2isim::validate(cfg);
                for (const auto& issue : issues) {
                    std::cerr << "sweep point error: " << issue.message << "\n";
                }
                if (!issues.empty()) {
                    return kExitUsage;
                }
            }
        }
    }

    const auto summaries =
        v2isim::run_sweep(spec, parallel, [](const v2isim::ScenarioConfig& cfg) {
            std::cerr << "point " << v2isim::to_string(cfg.scenario) << "/"
                      << v2isim::to_string(cfg.tech) << " density " << cfg.enb_density_per_km2
                      << " rate " << cfg.app_rate_bps << " done\n";
        });
    write_file_atomic(spec.output_path,
                      [&](std::ostream& out) { v2isim::write_metrics_csv(out, summaries); });
    std::cerr << "wrote " << spec.output_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"v2isim: vehicle-to-infrastructure downlink simulator"};

    std::string config_path;
    std::string sweep_path;
    std::string out_path;
    std::string trace = "none";
    int runs = 0;
    std::uint64_t seed = 0;
    int parallel = 1;

    auto* config_opt =
        app.add_option("--config", config_path, "Single campaign point config (JSON)");
    auto* sweep_opt = app.add_option("--sweep", sweep_path, "Sweep description (JSON)");
    config_opt->excludes(sweep_opt);
    sweep_opt->excludes(config_opt);
    auto* out_opt = app.add_option("--out", out_path, "Metrics CSV path");
    auto* runs_opt =
        app.add_option("--runs", runs, "Override the number of runs")->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", seed, "Override the master seed");
    app.add_option("--trace", trace, "Debug trace of run 0 (requires --config)")
        ->check(CLI::IsMember({"none", "packets", "links", "topology"}));
    app.add_option("--parallel", parallel, "Worker threads across runs")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (config_opt->count() == 0 && sweep_opt->count() == 0) {
        std::cerr << "one of --config or --sweep is required\n";
        return kExitUsage;
    }
    if (trace != "none" && config_opt->count() == 0) {
        std::cerr << "--trace requires --config\n";
        return kExitUsage;
    }

    try {
        if (config_opt->count() > 0) {
            v2isim::ScenarioConfig cfg;
            try {
                cfg = v2isim::load_config_file(config_path);
            } catch (const std::exception& e) {
                std::cerr << "cannot load config: " << e.what() << "\n";
                return kExitUsage;
            }
            if (runs_opt->count() > 0) {
                cfg.n_runs = runs;
            }
            if (seed_opt->count() > 0) {
                cfg.master_seed = seed;
            }
            if (out_opt->count() == 0) {
                out_path = "metrics.csv";
            }
            return run_single(cfg, out_path, trace, parallel);
        }

        v2isim::SweepSpec spec;
        try {
            spec = v2isim::load_sweep_file(sweep_path);
        } catch (const std::exception& e) {
            std::cerr << "cannot load sweep: " << e.what() << "\n";
            return kExitUsage;
        }
        if (runs_opt->count() > 0) {
            spec.n_runs = runs;
        }
        if (seed_opt->count() > 0) {
            spec.seed = seed;
        }
        if (out_opt->count() > 0) {
            spec.output_path = out_path;
        }
        return run_sweep_mode(spec, parallel);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
