#pragma once

#include <span>

#include "v2isim/channel.hpp"
#include "v2isim/config.hpp"
#include "v2isim/rng.hpp"

namespace v2isim {

// Truncated Shannon rate model.
inline constexpr double kSinrOutageDb = -5.0;   // below this the link is off
inline constexpr double kShannonGapDb = 3.0;    // implementation gap Gamma
inline constexpr double kEtaMaxLte = 4.8;       // b/s/Hz ceiling
inline constexpr double kEtaMaxMmWave = 7.4;

// Gain an interfering beam loses when it points away from the victim.
inline constexpr double kSidelobeBackoffDb = 20.0;
// 3 dB beamwidth of a uniform planar array, degrees per elements-per-side.
inline constexpr double kBeamwidthConstDeg = 102.0;

inline double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) noexcept { return 10.0 * std::log10(lin); }

// Thermal noise floor over the given bandwidth: -174 dBm/Hz + 10 log10(W) + NF.
double noise_floor_dbm(double bandwidth_hz, double noise_figure_db);

// Boresight gain of the array: 10 log10(elements). LTE runs omnidirectional,
// gain 0 regardless of the array field.
double max_antenna_gain_dbi(Tech t, ArrayGeometry a) noexcept;

// Sidelobe-level gain of a beam pointing elsewhere.
double min_antenna_gain_dbi(Tech t, ArrayGeometry a) noexcept;

// Probability that a randomly pointed beam covers the victim: beamwidth over
// the full circle, with the beamwidth shrinking as the array grows.
double beam_alignment_probability(ArrayGeometry a) noexcept;

// Per-endpoint gain sample. Aligned endpoints (the serving link) always get
// the boresight gain; unaligned endpoints draw boresight with the alignment
// probability and the sidelobe level otherwise.
double antenna_gain_dbi(Tech t, ArrayGeometry a, bool aligned, SplitMix64& rng);

// One co-channel interference path as seen by the victim in a slot.
struct InterfererSignal {
    double path_loss_db = 0.0;
    double shadowing_db = 0.0;
    double fading_power = 1.0;
    double tx_gain_dbi = 0.0;
    double rx_gain_dbi = 0.0;
};

struct LinkBudget {
    double rx_power_dbm = 0.0;
    double interference_dbm = 0.0;  // -inf when no co-channel transmitter
    double noise_dbm = 0.0;
    double sinr_db = 0.0;
    double capacity_bps = 0.0;
};

double rx_power_dbm(double tx_power_dbm, double path_loss_db, double shadowing_db,
                    double fading_power, double tx_gain_dbi, double rx_gain_dbi) noexcept;

// Full link budget of a serving link against a set of interference paths.
// Interference adds linearly; SINR and the truncated Shannon capacity follow.
LinkBudget compute_sinr(const LinkState& serving, double tx_gain_dbi, double rx_gain_dbi,
                        std::span<const InterfererSignal> interferers, const ScenarioConfig& cfg);

// W * min(eta_max, log2(1 + 10^((sinr - Gamma)/10))), zero below the outage
// threshold.
double link_capacity_bps(double sinr_db, double bandwidth_hz, Tech t) noexcept;

// Association metric: mean received power without fast fading, using the
// boresight gains of both endpoints.
double average_rx_power_dbm(const ScenarioConfig& cfg, const LinkState& link) noexcept;

}  // namespace v2isim
