#include "v2isim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace v2isim {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Environment heights (m): street-canyon sites at 10 m, rural masts at 35 m,
// vehicle antennas at 1.5 m. hE = 1 m sets the effective breakpoint height in
// the urban models.
constexpr double kUmiBsHeight = 10.0;
constexpr double kRmaBsHeight = 35.0;
constexpr double kUtHeight = 1.5;
constexpr double kEffEnvHeight = 1.0;

// Rural macro defaults: average building height and street width.
constexpr double kRmaBuildingHeight = 5.0;
constexpr double kRmaStreetWidth = 20.0;

double slant_distance(double d2d, double h_bs) {
    const double dh = h_bs - kUtHeight;
    return std::sqrt(d2d * d2d + dh * dh);
}

// Urban LOS path loss with a dual-slope breakpoint; the intercept and slope
// pair differs between the sub-6 GHz street-canyon table (28.0 / 22.0, 9.0)
// and the mmWave one (32.4 / 21.0, 9.5).
double urban_los(double d2d, double f_hz, double intercept, double slope, double bp_coeff) {
    const double f_ghz = f_hz / 1.0e9;
    const double d3d = slant_distance(d2d, kUmiBsHeight);
    const double d_bp =
        4.0 * (kUmiBsHeight - kEffEnvHeight) * (kUtHeight - kEffEnvHeight) * f_hz / kSpeedOfLight;
    if (d2d <= d_bp) {
        return intercept + slope * std::log10(d3d) + 20.0 * std::log10(f_ghz);
    }
    const double dh = kUmiBsHeight - kUtHeight;
    return intercept + 40.0 * std::log10(d3d) + 20.0 * std::log10(f_ghz) -
           bp_coeff * std::log10(d_bp * d_bp + dh * dh);
}

double lte_umi_los(double d2d, double f_hz) { return urban_los(d2d, f_hz, 28.0, 22.0, 9.0); }

double lte_umi_nlos(double d2d, double f_hz) {
    const double f_ghz = f_hz / 1.0e9;
    const double d3d = slant_distance(d2d, kUmiBsHeight);
    const double pl =
        36.7 * std::log10(d3d) + 22.7 + 26.0 * std::log10(f_ghz) - 0.3 * (kUtHeight - 1.5);
    return std::max(lte_umi_los(d2d, f_hz), pl);
}

double mmw_umi_los(double d2d, double f_hz) { return urban_los(d2d, f_hz, 32.4, 21.0, 9.5); }

double mmw_umi_nlos(double d2d, double f_hz) {
    const double f_ghz = f_hz / 1.0e9;
    const double d3d = slant_distance(d2d, kUmiBsHeight);
    const double pl =
        22.4 + 35.3 * std::log10(d3d) + 21.3 * std::log10(f_ghz) - 0.3 * (kUtHeight - 1.5);
    return std::max(mmw_umi_los(d2d, f_hz), pl);
}

double friis(double d, double f_hz) {
    return 20.0 * std::log10(4.0 * kPi * d * f_hz / kSpeedOfLight);
}

double rma_los_pl1(double d3d, double f_ghz) {
    const double h = kRmaBuildingHeight;
    const double a = std::min(0.03 * std::pow(h, 1.72), 10.0);
    const double b = std::min(0.044 * std::pow(h, 1.72), 14.77);
    return 20.0 * std::log10(40.0 * kPi * d3d * f_ghz / 3.0) + a * std::log10(d3d) - b +
           0.002 * std::log10(h) * d3d;
}

double rma_los(double d2d, double f_hz) {
    const double f_ghz = f_hz / 1.0e9;
    const double d_bp = 2.0 * kPi * kRmaBsHeight * kUtHeight * f_hz / kSpeedOfLight;
    const double d3d = slant_distance(d2d, kRmaBsHeight);
    if (d2d <= d_bp) {
        return rma_los_pl1(d3d, f_ghz);
    }
    const double d3d_bp = slant_distance(d_bp, kRmaBsHeight);
    return rma_los_pl1(d3d_bp, f_ghz) + 40.0 * std::log10(d3d / d3d_bp);
}

double rma_nlos(double d2d, double f_hz) {
    const double f_ghz = f_hz / 1.0e9;
    const double d3d = slant_distance(d2d, kRmaBsHeight);
    const double w = kRmaStreetWidth;
    const double h = kRmaBuildingHeight;
    const double h_bs = kRmaBsHeight;
    const double h_ut = kUtHeight;
    const double pl = 161.04 - 7.1 * std::log10(w) + 7.5 * std::log10(h) -
                      (24.37 - 3.7 * (h / h_bs) * (h / h_bs)) * std::log10(h_bs) +
                      (43.42 - 3.1 * std::log10(h_bs)) * (std::log10(d3d) - 3.0) +
                      20.0 * std::log10(f_ghz) -
                      (3.2 * std::pow(std::log10(11.75 * h_ut), 2.0) - 4.97);
    return std::max(rma_los(d2d, f_hz), pl);
}

}  // namespace

double bs_height_m(Scenario s) noexcept { return s == Scenario::UMi ? kUmiBsHeight : kRmaBsHeight; }

double ut_height_m() noexcept { return kUtHeight; }

double los_probability(Scenario s, Tech /*t*/, double distance_m) {
    if (distance_m < 0.0) {
        throw std::invalid_argument("los_probability: negative distance");
    }
    if (s == Scenario::UMi) {
        if (distance_m <= 18.0) {
            return 1.0;
        }
        const double ratio = 18.0 / distance_m;
        const double decay = std::exp(-distance_m / 36.0);
        return ratio + decay * (1.0 - ratio);
    }
    if (distance_m <= 10.0) {
        return 1.0;
    }
    return std::exp(-(distance_m - 10.0) / 1000.0);
}

double path_loss_db(Scenario s, Tech t, bool los, double distance_m, double carrier_hz) {
    if (distance_m < kMinPathLossDistanceM) {
        throw std::invalid_argument("path_loss_db: distance below 1 m");
    }
    if (carrier_hz <= 0.0) {
        throw std::invalid_argument("path_loss_db: non-positive carrier");
    }
    if (s == Scenario::UMi) {
        if (t == Tech::Lte) {
            return los ? lte_umi_los(distance_m, carrier_hz) : lte_umi_nlos(distance_m, carrier_hz);
        }
        return los ? mmw_umi_los(distance_m, carrier_hz) : mmw_umi_nlos(distance_m, carrier_hz);
    }
    if (t == Tech::Lte) {
        // Highway sub-6 GHz: free space, no visibility distinction.
        return friis(distance_m, carrier_hz);
    }
    return los ? rma_los(distance_m, carrier_hz) : rma_nlos(distance_m, carrier_hz);
}

double shadowing_sigma_db(Scenario s, Tech t, bool los) noexcept {
    if (s == Scenario::UMi) {
        if (t == Tech::Lte) {
            return los ? 3.0 : 4.0;
        }
        return los ? 4.0 : 7.82;
    }
    if (t == Tech::Lte) {
        return 0.0;  // free space is deterministic
    }
    return los ? 4.0 : 8.0;
}

double shadowing_decorr_m(Scenario s, Tech /*t*/, bool los) noexcept {
    if (s == Scenario::UMi) {
        return los ? 10.0 : 13.0;
    }
    return los ? 37.0 : 120.0;
}

double los_refresh_distance_m(Scenario s) noexcept { return s == Scenario::UMi ? 10.0 : 50.0; }

double sample_shadowing_db(Scenario s, Tech t, bool los, SplitMix64& rng) {
    return shadowing_sigma_db(s, t, los) * normal01(rng);
}

double max_doppler_hz(double speed_mps, double carrier_hz) noexcept {
    return speed_mps * carrier_hz / kSpeedOfLight;
}

void RayleighFading::reset(SplitMix64& rng) {
    const auto [re, im] = normal_pair(rng);
    h = {re * 0x1.6a09e667f3bcdp-1, im * 0x1.6a09e667f3bcdp-1};  // 1/sqrt(2)
}

void RayleighFading::step(double rho, SplitMix64& rng) {
    const double scale = std::sqrt(std::max(0.0, 1.0 - rho * rho) / 2.0);
    const auto [re, im] = normal_pair(rng);
    h = rho * h + std::complex<double>(scale * re, scale * im);
}

double RayleighFading::power() const noexcept {
    return std::max(std::norm(h), 1.0e-300);
}

const std::array<double, ClusterFading::kClusters>& ClusterFading::cluster_power() noexcept {
    // 3 dB decay per cluster, normalized to unit total mean power.
    static const std::array<double, kClusters> powers = [] {
        std::array<double, kClusters> p{};
        double total = 0.0;
        for (int n = 0; n < kClusters; ++n) {
            p[n] = std::pow(10.0, -0.3 * n);
            total += p[n];
        }
        for (auto& v : p) {
            v /= total;
        }
        return p;
    }();
    return powers;
}

void ClusterFading::reset(SplitMix64& rng) {
    const auto& powers = cluster_power();
    for (int n = 0; n < kClusters; ++n) {
        angle_rad[n] = uniform_range(rng, 0.0, 2.0 * kPi);
        const double sd = std::sqrt(powers[n] / 2.0);
        const auto [re, im] = normal_pair(rng);
        gain[n] = {sd * re, sd * im};
    }
}

void ClusterFading::step(double doppler_hz, double dt_s, double amp_rho, SplitMix64& rng) {
    const auto& powers = cluster_power();
    const double innov = std::sqrt(std::max(0.0, 1.0 - amp_rho * amp_rho) / 2.0);
    for (int n = 0; n < kClusters; ++n) {
        const double phase = 2.0 * kPi * doppler_hz * std::cos(angle_rad[n]) * dt_s;
        const std::complex<double> rot{std::cos(phase), std::sin(phase)};
        const double sd = innov * std::sqrt(powers[n]);
        const auto [re, im] = normal_pair(rng);
        gain[n] = rot * (amp_rho * gain[n] + std::complex<double>(sd * re, sd * im));
    }
}

double ClusterFading::power() const noexcept {
    std::complex<double> sum{0.0, 0.0};
    for (const auto& g : gain) {
        sum += g;
    }
    return std::max(std::norm(sum), 1.0e-300);
}

void Link::init(const ScenarioConfig& cfg, double distance_m, std::uint64_t seed, double now_s) {
    rng_ = SplitMix64(seed);
    state_.distance_m = distance_m;
    state_.last_update_s = now_s;
    traveled_since_los_m_ = 0.0;
    blocked_ = false;
    cached_dt_s_ = -1.0;
    refresh_los(cfg);
    z_shadow_ = normal01(rng_);
    if (cfg.tech == Tech::Lte) {
        rayleigh_.reset(rng_);
    } else {
        cluster_.reset(rng_);
    }
    update_derived(cfg);
}

void Link::refresh_los(const ScenarioConfig& cfg) {
    const double p = los_probability(cfg.scenario, cfg.tech, state_.distance_m);
    state_.los = uniform01(rng_) < p;
    traveled_since_los_m_ = 0.0;
}

void Link::update_derived(const ScenarioConfig& cfg) {
    const double d = std::max(state_.distance_m, kMinPathLossDistanceM);
    state_.path_loss_db = path_loss_db(cfg.scenario, cfg.tech, state_.los, d, cfg.carrier_hz);
    state_.shadowing_db = shadowing_sigma_db(cfg.scenario, cfg.tech, state_.los) * z_shadow_;
    state_.fading_power = cfg.tech == Tech::Lte ? rayleigh_.power() : cluster_.power();
    // Building shielding only bites on a path the statistical draw left LOS.
    if (blocked_ && state_.los) {
        interferer_pl_db_ = path_loss_db(cfg.scenario, cfg.tech, false, d, cfg.carrier_hz);
    } else {
        interferer_pl_db_ = state_.path_loss_db;
    }
}

void Link::advance(const ScenarioConfig& cfg, double distance_m, double traveled_m, double now_s,
                   bool teleported) {
    const double dt = now_s - state_.last_update_s;
    state_.distance_m = distance_m;
    state_.last_update_s = now_s;

    if (teleported) {
        // The vehicle jumped (wrap-around): the pair geometry is new, so the
        // small-displacement updates below would correlate unrelated places.
        refresh_los(cfg);
        z_shadow_ = normal01(rng_);
        if (cfg.tech == Tech::Lte) {
            rayleigh_.reset(rng_);
        } else {
            cluster_.reset(rng_);
        }
        update_derived(cfg);
        return;
    }

    traveled_since_los_m_ += traveled_m;
    bool redraw_clusters = false;
    if (traveled_since_los_m_ >= los_refresh_distance_m(cfg.scenario)) {
        refresh_los(cfg);
        redraw_clusters = true;
    }

    const double decorr = shadowing_decorr_m(cfg.scenario, cfg.tech, state_.los);
    const double rho_sf = std::exp(-traveled_m / decorr);
    z_shadow_ = rho_sf * z_shadow_ + std::sqrt(std::max(0.0, 1.0 - rho_sf * rho_sf)) * normal01(rng_);

    const double f_d = max_doppler_hz(cfg.vehicle_speed_mps, cfg.carrier_hz);
    if (cfg.fading_iid) {
        if (cfg.tech == Tech::Lte) {
            rayleigh_.reset(rng_);
        } else {
            cluster_.reset(rng_);
        }
    } else if (cfg.tech == Tech::Lte) {
        if (dt != cached_dt_s_) {
            cached_dt_s_ = dt;
            cached_rho_ = std::cyl_bessel_j(0.0, 2.0 * kPi * f_d * dt);
        }
        rayleigh_.step(cached_rho_, rng_);
    } else {
        if (redraw_clusters) {
            cluster_.reset(rng_);
        }
        if (dt != cached_dt_s_) {
            cached_dt_s_ = dt;
            cached_amp_rho_ =
                std::cyl_bessel_j(0.0, 2.0 * kPi * ClusterFading::kIntraClusterSpread * f_d * dt);
        }
        cluster_.step(f_d, dt, cached_amp_rho_, rng_);
    }

    update_derived(cfg);
}

}  // namespace v2isim
