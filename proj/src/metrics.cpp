#include "v2isim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace v2isim {

namespace {

double quiet_nan() noexcept { return std::numeric_limits<double>::quiet_NaN(); }

Aggregate aggregate_or_nan(const std::vector<double>& per_run) {
    if (per_run.empty()) {
        Aggregate a;
        a.mean = quiet_nan();
        return a;
    }
    return aggregate(per_run);
}

// Sorted cell populations of a run: throughputs[cell] lists the per-vehicle
// rates of the vehicles served by that cell.
std::vector<std::vector<double>> cell_throughputs(const RunResult& run) {
    std::vector<std::vector<double>> cells(static_cast<std::size_t>(run.n_enbs));
    const std::vector<double> rates = per_vehicle_throughputs(run);
    for (std::size_t v = 0; v < rates.size(); ++v) {
        const int e = run.vehicles[v].serving_enb_end;
        if (e < 0 || e >= run.n_enbs) {
            throw std::invalid_argument("cell_throughputs: serving id out of range");
        }
        cells[static_cast<std::size_t>(e)].push_back(rates[v]);
    }
    return cells;
}

}  // namespace

double student_t_975(int dof) noexcept {
    static constexpr double table[] = {
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
        2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
        2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
    };
    if (dof < 1) {
        return std::numeric_limits<double>::infinity();
    }
    if (dof <= 30) {
        return table[dof - 1];
    }
    if (dof <= 40) {
        return 2.021;
    }
    if (dof <= 60) {
        return 2.000;
    }
    if (dof <= 120) {
        return 1.980;
    }
    return 1.960;
}

Aggregate aggregate(std::span<const double> per_run_values) {
    if (per_run_values.empty()) {
        throw std::invalid_argument("aggregate: no values");
    }
    Aggregate a;
    const std::size_t n = per_run_values.size();
    double sum = 0.0;
    for (double v : per_run_values) {
        sum += v;
    }
    a.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : per_run_values) {
            const double d = v - a.mean;
            ss += d * d;
        }
        const double stddev = std::sqrt(ss / static_cast<double>(n - 1));
        a.ci95 = student_t_975(static_cast<int>(n) - 1) * stddev /
                 std::sqrt(static_cast<double>(n));
    }
    a.per_run.assign(per_run_values.begin(), per_run_values.end());
    return a;
}

std::vector<double> per_vehicle_throughputs(const RunResult& run) {
    if (run.window_s <= 0.0) {
        throw std::invalid_argument("per_vehicle_throughputs: empty measurement window");
    }
    std::vector<double> rates;
    rates.reserve(run.vehicles.size());
    for (const VehicleResult& v : run.vehicles) {
        rates.push_back(v.delivered_bytes_window * 8.0 / run.window_s);
    }
    return rates;
}

double avg_throughput_bps(const RunResult& run) {
    const std::vector<double> rates = per_vehicle_throughputs(run);
    if (rates.empty()) {
        throw std::invalid_argument("avg_throughput_bps: run has no vehicles");
    }
    double sum = 0.0;
    for (double r : rates) {
        sum += r;
    }
    return sum / static_cast<double>(rates.size());
}

double total_throughput_median_cell_bps(const RunResult& run) {
    const std::vector<std::vector<double>> cells = cell_throughputs(run);
    if (cells.empty()) {
        throw std::invalid_argument("total_throughput_median_cell_bps: no cells");
    }
    std::vector<double> totals;
    totals.reserve(cells.size());
    for (const auto& cell : cells) {
        double sum = 0.0;
        for (double r : cell) {
            sum += r;
        }
        totals.push_back(sum);
    }
    std::sort(totals.begin(), totals.end());
    return totals[(totals.size() - 1) / 2];  // lower median, deterministic
}

double lower_percentile_mean(std::span<const double> values, double q) {
    if (values.empty()) {
        throw std::invalid_argument("lower_percentile_mean: no values");
    }
    if (q <= 0.0 || q > 1.0) {
        throw std::invalid_argument("lower_percentile_mean: quantile out of (0, 1]");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t k = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(sorted.size())));
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sum += sorted[i];
    }
    return sum / static_cast<double>(k);
}

double avg_latency_s(const RunResult& run) {
    double latency_sum = 0.0;
    std::uint64_t delivered = 0;
    for (const VehicleResult& v : run.vehicles) {
        latency_sum += v.latency_sum_window_s;
        delivered += v.delivered_window;
    }
    if (delivered == 0) {
        throw std::invalid_argument("avg_latency_s: nothing delivered in the window");
    }
    return latency_sum / static_cast<double>(delivered);
}

double jain_index(std::span<const double> throughputs) {
    if (throughputs.empty()) {
        throw std::invalid_argument("jain_index: no values");
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double x : throughputs) {
        sum += x;
        sum_sq += x * x;
    }
    if (sum_sq == 0.0) {
        throw std::invalid_argument("jain_index: all values are zero");
    }
    return sum * sum / (static_cast<double>(throughputs.size()) * sum_sq);
}

double jain_per_cell(const RunResult& run) {
    const std::vector<std::vector<double>> cells = cell_throughputs(run);
    double sum = 0.0;
    int active = 0;
    for (const auto& cell : cells) {
        double cell_sum = 0.0;
        for (double r : cell) {
            cell_sum += r;
        }
        if (cell_sum > 0.0) {
            sum += jain_index(cell);
            ++active;
        }
    }
    if (active == 0) {
        return quiet_nan();
    }
    return sum / active;
}

MetricsReport compute_report(std::span<const RunResult> runs) {
    if (runs.empty()) {
        throw std::invalid_argument("compute_report: no runs");
    }

    std::vector<double> avg, total, p5, p10, latency, jain;
    std::vector<double> pooled;
    for (const RunResult& run : runs) {
        if (run.vehicles.empty()) {
            continue;  // an empty vehicle drop carries no traffic statistics
        }
        const std::vector<double> rates = per_vehicle_throughputs(run);
        pooled.insert(pooled.end(), rates.begin(), rates.end());

        avg.push_back(avg_throughput_bps(run));
        total.push_back(total_throughput_median_cell_bps(run));
        p5.push_back(lower_percentile_mean(rates, 0.05));
        p10.push_back(lower_percentile_mean(rates, 0.10));

        bool any_delivered = false;
        for (const VehicleResult& v : run.vehicles) {
            if (v.delivered_window > 0) {
                any_delivered = true;
                break;
            }
        }
        if (any_delivered) {
            latency.push_back(avg_latency_s(run));
        }
        const double j = jain_per_cell(run);
        if (!std::isnan(j)) {
            jain.push_back(j);
        }
    }
    if (pooled.empty()) {
        throw std::invalid_argument("compute_report: no run contains vehicles");
    }

    MetricsReport report;
    report.avg_throughput_bps = aggregate_or_nan(avg);
    report.total_throughput_bps = aggregate_or_nan(total);

    // Percentile tails are pooled over every run's vehicles so the sample is
    // large enough; the per-run tails still supply the spread.
    report.p5_throughput_bps = aggregate_or_nan(p5);
    report.p5_throughput_bps.mean = lower_percentile_mean(pooled, 0.05);
    report.p10_throughput_bps = aggregate_or_nan(p10);
    report.p10_throughput_bps.mean = lower_percentile_mean(pooled, 0.10);

    report.avg_latency_s = aggregate_or_nan(latency);
    report.jain = aggregate_or_nan(jain);
    return report;
}

}  // namespace v2isim
