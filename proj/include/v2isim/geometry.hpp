#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "v2isim/channel.hpp"
#include "v2isim/config.hpp"
#include "v2isim/rng.hpp"

namespace v2isim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Vec2&) const = default;
};

// Axis-aligned building footprint, used for urban interference shielding.
struct Building {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    bool contains(Vec2 p) const noexcept;
    // True when the open segment between a and b crosses the footprint.
    bool intersects_segment(Vec2 a, Vec2 b) const noexcept;
};

struct Vehicle {
    Vec2 pos{};
    Vec2 vel{};
    int serving_enb = 0;
};

struct Topology {
    double area_side_m = 0.0;
    std::vector<Vec2> enbs;
    std::vector<Vehicle> vehicles;
    std::vector<Building> buildings;  // urban grid, empty for rural
};

// Homogeneous PPP on the square: Poisson count with mean density * area,
// positions uniform. May legitimately return an empty list.
std::vector<Vec2> sample_ppp(double area_side_m, double density_per_km2, SplitMix64& rng);

// Vehicle drop: Poisson(vehicles_per_enb * |enbs|) vehicles uniform over the
// area. Urban vehicles get a uniform random heading at the configured speed;
// rural vehicles drive along x with a random direction sign. The serving id
// bootstraps to the nearest eNB; call reassociate() once link states exist.
std::vector<Vehicle> place_vehicles(std::span<const Vec2> enbs, int vehicles_per_enb,
                                    Scenario scenario, double speed_mps, double area_side_m,
                                    SplitMix64& rng);

// Regular grid of square buildings covering 40% of the area (7x7 blocks).
std::vector<Building> building_grid(double area_side_m);

// Advances every vehicle by dt. Urban: straight line with specular reflection
// at the borders. Rural: straight line along x with wrap-around. Returns one
// flag per vehicle, true when the vehicle wrapped (its links must be redrawn).
std::vector<bool> step_mobility(Topology& topo, double dt_s);

// Re-serves every vehicle to the eNB with the strongest mean received power,
// i.e. the smallest path loss + shadowing (fast fading excluded; transmit
// power and boresight gains are common to all candidates). Ties break to the
// lowest eNB id. `links` is vehicle-major: links[v * n_enb + e].
void reassociate(Topology& topo, std::span<const Link> links);

// True when the straight path between two points crosses any building.
bool crosses_building(const Topology& topo, Vec2 a, Vec2 b) noexcept;

double distance(Vec2 a, Vec2 b) noexcept;

}  // namespace v2isim
