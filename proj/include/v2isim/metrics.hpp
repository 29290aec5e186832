#pragma once

#include <span>
#include <vector>

#include "v2isim/config.hpp"
#include "v2isim/engine.hpp"

namespace v2isim {

// Mean and half-width of the Student-t 95% confidence interval over runs.
struct Aggregate {
    double mean = 0.0;
    double ci95 = 0.0;
    std::vector<double> per_run;
};

Aggregate aggregate(std::span<const double> per_run_values);

// Two-sided 97.5% Student-t quantile for the given degrees of freedom.
double student_t_975(int dof) noexcept;

// Per-vehicle delivered rate over the measurement window, bits per second.
std::vector<double> per_vehicle_throughputs(const RunResult& run);

// Mean over vehicles of the per-vehicle delivered rate. Throws
// std::invalid_argument on an empty window or a run without vehicles.
double avg_throughput_bps(const RunResult& run);

// Sum of the per-vehicle rates within each cell; returns the median cell so
// one number represents a typically loaded eNB.
double total_throughput_median_cell_bps(const RunResult& run);

// Mean of the lowest ceil(q * n) values of `values`.
double lower_percentile_mean(std::span<const double> values, double q);

// Mean latency over the packets delivered inside the window. Throws
// std::invalid_argument when nothing was delivered.
double avg_latency_s(const RunResult& run);

// Jain fairness of a throughput list: (sum)^2 / (n * sum of squares).
// Throws std::invalid_argument when the list is empty or all zero.
double jain_index(std::span<const double> throughputs);

// Jain fairness evaluated per cell (the cell population is the user count of
// the fairness formula) and averaged over the cells with any delivered
// traffic. NaN when no cell delivered anything.
double jain_per_cell(const RunResult& run);

struct MetricsReport {
    Aggregate avg_throughput_bps;
    Aggregate total_throughput_bps;
    Aggregate p5_throughput_bps;   // mean = pooled across runs; ci from per-run
    Aggregate p10_throughput_bps;
    Aggregate avg_latency_s;
    Aggregate jain;
};

// Aggregates a campaign. Percentile means pool the per-vehicle throughputs of
// every run (the per-run values back the confidence interval); the other
// metrics are per-run values aggregated with the Student-t interval.
MetricsReport compute_report(std::span<const RunResult> runs);

}  // namespace v2isim
