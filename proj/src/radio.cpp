#include "v2isim/radio.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace v2isim {

double noise_floor_dbm(double bandwidth_hz, double noise_figure_db) {
    if (bandwidth_hz <= 0.0) {
        throw std::invalid_argument("noise_floor_dbm: non-positive bandwidth");
    }
    return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double max_antenna_gain_dbi(Tech t, ArrayGeometry a) noexcept {
    if (t == Tech::Lte) {
        return 0.0;
    }
    return 10.0 * std::log10(static_cast<double>(a.elements()));
}

double min_antenna_gain_dbi(Tech t, ArrayGeometry a) noexcept {
    if (t == Tech::Lte) {
        return 0.0;
    }
    return max_antenna_gain_dbi(t, a) - kSidelobeBackoffDb;
}

double beam_alignment_probability(ArrayGeometry a) noexcept {
    const double n_side = std::sqrt(static_cast<double>(a.elements()));
    const double beamwidth_deg = kBeamwidthConstDeg / n_side;
    return beamwidth_deg / 360.0;
}

double antenna_gain_dbi(Tech t, ArrayGeometry a, bool aligned, SplitMix64& rng) {
    if (t == Tech::Lte) {
        return 0.0;
    }
    if (aligned) {
        return max_antenna_gain_dbi(t, a);
    }
    const double p = beam_alignment_probability(a);
    return uniform01(rng) < p ? max_antenna_gain_dbi(t, a) : min_antenna_gain_dbi(t, a);
}

double rx_power_dbm(double tx_power_dbm, double path_loss_db, double shadowing_db,
                    double fading_power, double tx_gain_dbi, double rx_gain_dbi) noexcept {
    return tx_power_dbm - path_loss_db - shadowing_db + linear_to_db(fading_power) + tx_gain_dbi +
           rx_gain_dbi;
}

LinkBudget compute_sinr(const LinkState& serving, double tx_gain_dbi, double rx_gain_dbi,
                        std::span<const InterfererSignal> interferers, const ScenarioConfig& cfg) {
    LinkBudget budget;
    budget.noise_dbm = noise_floor_dbm(cfg.bandwidth_hz, cfg.noise_figure_db);
    budget.rx_power_dbm = rx_power_dbm(cfg.tx_power_dbm, serving.path_loss_db,
                                       serving.shadowing_db, serving.fading_power, tx_gain_dbi,
                                       rx_gain_dbi);

    double interference_mw = 0.0;
    for (const auto& i : interferers) {
        interference_mw += db_to_linear(rx_power_dbm(cfg.tx_power_dbm, i.path_loss_db,
                                                     i.shadowing_db, i.fading_power, i.tx_gain_dbi,
                                                     i.rx_gain_dbi));
    }
    budget.interference_dbm = interference_mw > 0.0
                                  ? linear_to_db(interference_mw)
                                  : -std::numeric_limits<double>::infinity();

    const double denom_mw = interference_mw + db_to_linear(budget.noise_dbm);
    budget.sinr_db = budget.rx_power_dbm - linear_to_db(denom_mw);
    budget.capacity_bps = link_capacity_bps(budget.sinr_db, cfg.bandwidth_hz, cfg.tech);
    return budget;
}

double link_capacity_bps(double sinr_db, double bandwidth_hz, Tech t) noexcept {
    if (sinr_db < kSinrOutageDb) {
        return 0.0;
    }
    const double eta_max = t == Tech::Lte ? kEtaMaxLte : kEtaMaxMmWave;
    const double eta = std::log2(1.0 + db_to_linear(sinr_db - kShannonGapDb));
    return bandwidth_hz * std::min(eta_max, eta);
}

double average_rx_power_dbm(const ScenarioConfig& cfg, const LinkState& link) noexcept {
    return cfg.tx_power_dbm - link.path_loss_db - link.shadowing_db +
           max_antenna_gain_dbi(cfg.tech, cfg.enb_array) +
           max_antenna_gain_dbi(cfg.tech, cfg.vehicle_array);
}

}  // namespace v2isim
