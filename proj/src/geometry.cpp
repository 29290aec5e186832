#include "v2isim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace v2isim {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr int kBlocksPerSide = 7;
constexpr double kBuiltFraction = 0.4;
}  // namespace

double distance(Vec2 a, Vec2 b) noexcept {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

bool Building::contains(Vec2 p) const noexcept {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
}

bool Building::intersects_segment(Vec2 a, Vec2 b) const noexcept {
    // Slab clipping of the parametric segment a + t (b - a), t in [0, 1].
    double t0 = 0.0;
    double t1 = 1.0;
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;

    auto clip = [&t0, &t1](double delta, double lo, double hi, double origin) {
        if (delta == 0.0) {
            return origin >= lo && origin <= hi;
        }
        double ta = (lo - origin) / delta;
        double tb = (hi - origin) / delta;
        if (ta > tb) {
            std::swap(ta, tb);
        }
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        return t0 <= t1;
    };

    return clip(dx, x0, x1, a.x) && clip(dy, y0, y1, a.y);
}

std::vector<Vec2> sample_ppp(double area_side_m, double density_per_km2, SplitMix64& rng) {
    if (area_side_m <= 0.0) {
        throw std::invalid_argument("sample_ppp: non-positive area side");
    }
    if (density_per_km2 <= 0.0) {
        throw std::invalid_argument("sample_ppp: non-positive density");
    }
    const double side_km = area_side_m / 1000.0;
    const double mean = density_per_km2 * side_km * side_km;
    const int count = sample_poisson(rng, mean);
    std::vector<Vec2> points;
    points.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double x = uniform_range(rng, 0.0, area_side_m);
        const double y = uniform_range(rng, 0.0, area_side_m);
        points.push_back({x, y});
    }
    return points;
}

std::vector<Vehicle> place_vehicles(std::span<const Vec2> enbs, int vehicles_per_enb,
                                    Scenario scenario, double speed_mps, double area_side_m,
                                    SplitMix64& rng) {
    if (enbs.empty()) {
        throw std::invalid_argument("place_vehicles: no eNBs to serve the vehicles");
    }
    if (vehicles_per_enb < 0) {
        throw std::invalid_argument("place_vehicles: negative vehicles_per_enb");
    }
    const double mean = static_cast<double>(vehicles_per_enb) * static_cast<double>(enbs.size());
    const int count = sample_poisson(rng, mean);

    std::vector<Vehicle> vehicles;
    vehicles.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Vehicle v;
        v.pos = {uniform_range(rng, 0.0, area_side_m), uniform_range(rng, 0.0, area_side_m)};
        if (scenario == Scenario::UMi) {
            const double heading = uniform_range(rng, 0.0, 2.0 * kPi);
            v.vel = {speed_mps * std::cos(heading), speed_mps * std::sin(heading)};
        } else {
            const double sign = uniform01(rng) < 0.5 ? 1.0 : -1.0;
            v.vel = {sign * speed_mps, 0.0};
        }
        // Nearest eNB equals strongest mean power while no shadowing exists;
        // the engine re-associates with full link states before t = 0.
        int best = 0;
        double best_d = distance(v.pos, enbs[0]);
        for (std::size_t e = 1; e < enbs.size(); ++e) {
            const double d = distance(v.pos, enbs[e]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(e);
            }
        }
        v.serving_enb = best;
        vehicles.push_back(v);
    }
    return vehicles;
}

std::vector<Building> building_grid(double area_side_m) {
    // Square blocks on a regular grid; side chosen so the footprints cover
    // kBuiltFraction of the area, the rest being streets.
    const double pitch = area_side_m / kBlocksPerSide;
    const double side = pitch * std::sqrt(kBuiltFraction);
    const double margin = (pitch - side) / 2.0;
    std::vector<Building> buildings;
    buildings.reserve(static_cast<std::size_t>(kBlocksPerSide) * kBlocksPerSide);
    for (int i = 0; i < kBlocksPerSide; ++i) {
        for (int j = 0; j < kBlocksPerSide; ++j) {
            const double x0 = i * pitch + margin;
            const double y0 = j * pitch + margin;
            buildings.push_back({x0, y0, x0 + side, y0 + side});
        }
    }
    return buildings;
}

std::vector<bool> step_mobility(Topology& topo, double dt_s) {
    std::vector<bool> wrapped(topo.vehicles.size(), false);
    const double side = topo.area_side_m;
    for (std::size_t i = 0; i < topo.vehicles.size(); ++i) {
        Vehicle& v = topo.vehicles[i];
        double x = v.pos.x + v.vel.x * dt_s;
        double y = v.pos.y + v.vel.y * dt_s;
        if (topo.buildings.empty() && v.vel.y == 0.0) {
            // Rural straight-line drive with x wrap-around.
            if (x < 0.0) {
                x += side;
                wrapped[i] = true;
            } else if (x >= side) {
                x -= side;
                wrapped[i] = true;
            }
        } else {
            // Urban: specular reflection keeps the vehicle in the box.
            if (x < 0.0) {
                x = -x;
                v.vel.x = -v.vel.x;
            } else if (x > side) {
                x = 2.0 * side - x;
                v.vel.x = -v.vel.x;
            }
            if (y < 0.0) {
                y = -y;
                v.vel.y = -v.vel.y;
            } else if (y > side) {
                y = 2.0 * side - y;
                v.vel.y = -v.vel.y;
            }
        }
        v.pos = {std::clamp(x, 0.0, side), std::clamp(y, 0.0, side)};
    }
    return wrapped;
}

void reassociate(Topology& topo, std::span<const Link> links) {
    const std::size_t n_enb = topo.enbs.size();
    if (links.size() != topo.vehicles.size() * n_enb) {
        throw std::invalid_argument("reassociate: link matrix size mismatch");
    }
    for (std::size_t v = 0; v < topo.vehicles.size(); ++v) {
        int best = 0;
        double best_metric = std::numeric_limits<double>::infinity();
        for (std::size_t e = 0; e < n_enb; ++e) {
            const LinkState& s = links[v * n_enb + e].state();
            // Equivalent to max mean received power: transmit power and
            // boresight gains are common across candidates.
            const double metric = s.path_loss_db + s.shadowing_db;
            if (metric < best_metric) {
                best_metric = metric;
                best = static_cast<int>(e);
            }
        }
        topo.vehicles[v].serving_enb = best;
    }
}

bool crosses_building(const Topology& topo, Vec2 a, Vec2 b) noexcept {
    for (const auto& building : topo.buildings) {
        if (building.intersects_segment(a, b)) {
            return true;
        }
    }
    return false;
}

}  // namespace v2isim
