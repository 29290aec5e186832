#pragma once

#include <array>
#include <complex>
#include <cstdint>

#include "v2isim/config.hpp"
#include "v2isim/rng.hpp"

namespace v2isim {

inline constexpr double kSpeedOfLight = 3.0e8;  // m/s, see rationale in tests
inline constexpr double kMinPathLossDistanceM = 1.0;

// Fixed endpoint heights per deployment; link distances are 2-D, the slant
// distance used by the street-canyon and rural formulas is derived from these.
double bs_height_m(Scenario s) noexcept;
double ut_height_m() noexcept;

// Instantaneous radio state of one (vehicle, eNB) pair.
struct LinkState {
    double distance_m = 0.0;    // 2-D ground distance
    bool los = true;
    double path_loss_db = 0.0;
    double shadowing_db = 0.0;
    double fading_power = 1.0;  // linear small-scale power gain, unit mean
    double last_update_s = 0.0;
};

// Probability that a link of the given ground distance is line of sight.
// Urban: 1 up to 18 m, then 18/d + exp(-d/36)(1 - 18/d).
// Rural: 1 up to 10 m, then exp(-(d - 10)/1000).
double los_probability(Scenario s, Tech t, double distance_m);

// Large-scale path loss in dB for a link in the given visibility state.
// Urban LTE: 3D-UMi street canyon; urban mmWave: UMi-Street-Canyon;
// rural mmWave: RMa; rural LTE: free space (LOS == NLOS there).
// NLOS values are floored at the LOS value of the same distance.
double path_loss_db(Scenario s, Tech t, bool los, double distance_m, double carrier_hz);

// Log-normal shadowing spread for the model picked by (s, t, los). Zero for
// the deterministic free-space combination.
double shadowing_sigma_db(Scenario s, Tech t, bool los) noexcept;

// Horizontal decorrelation distance of the shadowing process.
double shadowing_decorr_m(Scenario s, Tech t, bool los) noexcept;

// Travel distance after which the frozen LOS draw is refreshed.
double los_refresh_distance_m(Scenario s) noexcept;

// Fresh shadowing draw, N(0, sigma^2) in dB.
double sample_shadowing_db(Scenario s, Tech t, bool los, SplitMix64& rng);

// Maximum Doppler shift of a vehicle moving at the given speed.
double max_doppler_hz(double speed_mps, double carrier_hz) noexcept;

// Rayleigh channel as a first-order autoregressive complex-Gaussian process.
// The marginal is exactly CN(0,1); the one-step correlation is set by the
// caller to J0(2 pi f_D dt), matching the Jakes autocorrelation at the tick.
struct RayleighFading {
    std::complex<double> h{1.0, 0.0};

    void reset(SplitMix64& rng);
    void step(double rho, SplitMix64& rng);
    double power() const noexcept;
};

// Reduced cluster channel: kClusters paths with 3 dB per-cluster power decay
// (normalized to unit total mean), uniform random angles relative to the
// direction of motion, deterministic per-cluster phase rotation at
// f_D cos(angle), and a slow AR(1) amplitude decorrelation representing
// intra-cluster angular spread.
struct ClusterFading {
    static constexpr int kClusters = 4;
    // Fraction of the Doppler bandwidth driving amplitude decorrelation.
    static constexpr double kIntraClusterSpread = 0.25;

    std::array<std::complex<double>, kClusters> gain{};
    std::array<double, kClusters> angle_rad{};

    static const std::array<double, kClusters>& cluster_power() noexcept;

    void reset(SplitMix64& rng);
    void step(double doppler_hz, double dt_s, double amp_rho, SplitMix64& rng);
    double power() const noexcept;
};

// Persistent channel state of one (vehicle, eNB) pair. Owns its RNG stream;
// identical seeds and update sequences reproduce identical trajectories.
class Link {
  public:
    Link() = default;

    // Draws the initial LOS state, shadowing and fading for a link of the
    // given ground distance.
    void init(const ScenarioConfig& cfg, double distance_m, std::uint64_t seed, double now_s);

    // Advances the link after the vehicle moved traveled_m along its path and
    // the ground distance became distance_m. `teleported` forces a full
    // redraw (used when a wrap-around relocates the vehicle).
    void advance(const ScenarioConfig& cfg, double distance_m, double traveled_m, double now_s,
                 bool teleported = false);

    const LinkState& state() const noexcept { return state_; }

    // Path loss seen when this link acts as an interference path. Equals the
    // regular path loss unless a building blocks the path, which forces the
    // NLOS value (urban mmWave shielding).
    double interferer_path_loss_db() const noexcept { return interferer_pl_db_; }

    void set_blocked(bool blocked) noexcept { blocked_ = blocked; }
    bool blocked() const noexcept { return blocked_; }

  private:
    void refresh_los(const ScenarioConfig& cfg);
    void update_derived(const ScenarioConfig& cfg);

    LinkState state_{};
    SplitMix64 rng_{0};
    double z_shadow_ = 0.0;            // standard-normal AR state
    double traveled_since_los_m_ = 0.0;
    bool blocked_ = false;
    double interferer_pl_db_ = 0.0;

    RayleighFading rayleigh_{};
    ClusterFading cluster_{};

    // One-step fading correlations are cached against the tick length; the
    // Bessel evaluations only rerun when dt changes.
    double cached_dt_s_ = -1.0;
    double cached_rho_ = 1.0;
    double cached_amp_rho_ = 1.0;
};

}  // namespace v2isim
