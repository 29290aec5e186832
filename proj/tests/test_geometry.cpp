#include <doctest.h>

#include <cmath>
#include <set>

#include "v2isim/geometry.hpp"

using namespace v2isim;

TEST_CASE("PPP counts are Poisson with the area mean and positions stay inside") {
    SplitMix64 rng(1);
    const double side = 500.0;
    const double density = 40.0;
    const double mean = density * 0.25;  // 0.25 km^2

    const int draws = 2000;
    double count_sum = 0.0;
    double count_sq = 0.0;
    for (int i = 0; i < draws; ++i) {
        const auto points = sample_ppp(side, density, rng);
        count_sum += static_cast<double>(points.size());
        count_sq += static_cast<double>(points.size()) * static_cast<double>(points.size());
        for (const auto& p : points) {
            REQUIRE(p.x >= 0.0);
            REQUIRE(p.x <= side);
            REQUIRE(p.y >= 0.0);
            REQUIRE(p.y <= side);
        }
    }
    const double count_mean = count_sum / draws;
    const double count_var = count_sq / draws - count_mean * count_mean;
    const double se = std::sqrt(mean / draws);
    CHECK(std::abs(count_mean - mean) < 4.0 * se);
    // Poisson variance equals the mean.
    CHECK(count_var == doctest::Approx(mean).epsilon(0.15));

    CHECK_THROWS(sample_ppp(0.0, 40.0, rng));
    CHECK_THROWS(sample_ppp(500.0, -1.0, rng));
}

TEST_CASE("building grid covers 40% of the area with disjoint blocks") {
    const double side = 500.0;
    const auto buildings = building_grid(side);
    REQUIRE(buildings.size() == 49);

    double covered = 0.0;
    for (const auto& b : buildings) {
        REQUIRE(b.x0 < b.x1);
        REQUIRE(b.y0 < b.y1);
        REQUIRE(b.x0 >= 0.0);
        REQUIRE(b.y1 <= side);
        covered += (b.x1 - b.x0) * (b.y1 - b.y0);
    }
    CHECK(covered == doctest::Approx(0.4 * side * side).epsilon(1e-9));

    // Disjoint: street margins separate every pair of blocks.
    for (std::size_t i = 0; i < buildings.size(); ++i) {
        for (std::size_t j = i + 1; j < buildings.size(); ++j) {
            const auto& a = buildings[i];
            const auto& b = buildings[j];
            const bool overlap =
                a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
            REQUIRE_FALSE(overlap);
        }
    }
}

TEST_CASE("segment-footprint intersection") {
    const Building b{10.0, 10.0, 20.0, 20.0};
    CHECK(b.contains({15.0, 15.0}));
    CHECK_FALSE(b.contains({25.0, 15.0}));

    CHECK(b.intersects_segment({0.0, 15.0}, {30.0, 15.0}));   // straight through
    CHECK(b.intersects_segment({12.0, 12.0}, {18.0, 18.0}));  // fully inside
    CHECK(b.intersects_segment({0.0, 0.0}, {30.0, 30.0}));    // diagonal through
    CHECK(b.intersects_segment({15.0, 0.0}, {15.0, 30.0}));   // vertical through
    CHECK_FALSE(b.intersects_segment({0.0, 5.0}, {30.0, 5.0}));    // passes below
    CHECK_FALSE(b.intersects_segment({0.0, 25.0}, {5.0, 0.0}));    // misses corner
    CHECK_FALSE(b.intersects_segment({0.0, 0.0}, {9.0, 9.0}));     // stops short
}

TEST_CASE("street corridors of the grid stay clear") {
    Topology topo;
    topo.area_side_m = 500.0;
    topo.buildings = building_grid(500.0);

    // The first street margin is (pitch - block side) / 2 wide, about 13 m.
    CHECK_FALSE(crosses_building(topo, {0.0, 5.0}, {500.0, 5.0}));
    CHECK(crosses_building(topo, {0.0, 35.0}, {500.0, 35.0}));
    CHECK(crosses_building(topo, {0.0, 0.0}, {500.0, 500.0}));
}

TEST_CASE("vehicle drop follows the per-cell load and moves at the set speed") {
    SplitMix64 rng(5);
    const std::vector<Vec2> enbs{{100.0, 100.0}, {400.0, 100.0}, {250.0, 400.0}};
    const double speed = 8.33;

    const int draws = 500;
    double count_sum = 0.0;
    bool saw_left = false;
    bool saw_right = false;
    for (int i = 0; i < draws; ++i) {
        const auto vehicles = place_vehicles(enbs, 10, Scenario::UMi, speed, 500.0, rng);
        count_sum += static_cast<double>(vehicles.size());
        for (const auto& v : vehicles) {
            REQUIRE(std::hypot(v.vel.x, v.vel.y) == doctest::Approx(speed).epsilon(1e-9));
            // Bootstrapped serving id is the nearest site.
            int nearest = 0;
            for (std::size_t e = 1; e < enbs.size(); ++e) {
                if (distance(v.pos, enbs[e]) < distance(v.pos, enbs[nearest])) {
                    nearest = static_cast<int>(e);
                }
            }
            REQUIRE(v.serving_enb == nearest);
            if (v.vel.x < 0.0) saw_left = true;
            if (v.vel.x > 0.0) saw_right = true;
        }
    }
    const double mean = 30.0;
    CHECK(std::abs(count_sum / draws - mean) < 4.0 * std::sqrt(mean / draws));
    CHECK(saw_left);
    CHECK(saw_right);

    SUBCASE("rural vehicles drive along the road axis, both directions") {
        bool neg = false;
        bool pos = false;
        for (int i = 0; i < 50; ++i) {
            for (const auto& v : place_vehicles(enbs, 10, Scenario::RMa, 33.3, 500.0, rng)) {
                REQUIRE(v.vel.y == 0.0);
                REQUIRE(std::abs(v.vel.x) == doctest::Approx(33.3));
                (v.vel.x < 0.0 ? neg : pos) = true;
            }
        }
        CHECK(neg);
        CHECK(pos);
    }

    CHECK_THROWS(place_vehicles({}, 10, Scenario::UMi, speed, 500.0, rng));
}

TEST_CASE("urban mobility reflects at the walls, keeping the speed") {
    Topology topo;
    topo.area_side_m = 100.0;
    topo.buildings = building_grid(100.0);
    Vehicle v;
    v.pos = {99.0, 50.0};
    v.vel = {20.0, 0.0};
    topo.vehicles.push_back(v);

    const auto wrapped = step_mobility(topo, 0.1);  // would reach x = 101
    REQUIRE(wrapped.size() == 1);
    CHECK_FALSE(wrapped[0]);
    CHECK(topo.vehicles[0].pos.x == doctest::Approx(99.0).epsilon(1e-12));
    CHECK(topo.vehicles[0].vel.x == doctest::Approx(-20.0).epsilon(1e-12));

    // A long straight drive stays inside and keeps the speed.
    topo.vehicles[0].vel = {14.0, -14.0};
    for (int i = 0; i < 1000; ++i) {
        step_mobility(topo, 0.05);
        REQUIRE(topo.vehicles[0].pos.x >= 0.0);
        REQUIRE(topo.vehicles[0].pos.x <= 100.0);
        REQUIRE(topo.vehicles[0].pos.y >= 0.0);
        REQUIRE(topo.vehicles[0].pos.y <= 100.0);
    }
    CHECK(std::hypot(topo.vehicles[0].vel.x, topo.vehicles[0].vel.y) ==
          doctest::Approx(std::hypot(14.0, -14.0)).epsilon(1e-9));
}

TEST_CASE("rural mobility wraps around and reports the teleport") {
    Topology topo;
    topo.area_side_m = 1000.0;
    Vehicle v;
    v.pos = {998.0, 300.0};
    v.vel = {33.3, 0.0};
    topo.vehicles.push_back(v);
    v.pos = {500.0, 300.0};
    v.vel = {-33.3, 0.0};
    topo.vehicles.push_back(v);

    const auto wrapped = step_mobility(topo, 0.1);
    CHECK(wrapped[0]);
    CHECK_FALSE(wrapped[1]);
    CHECK(topo.vehicles[0].pos.x == doctest::Approx(998.0 + 3.33 - 1000.0).epsilon(1e-9));
    CHECK(topo.vehicles[0].pos.y == 300.0);
    CHECK(topo.vehicles[0].vel.x == doctest::Approx(33.3));
}

TEST_CASE("reassociation picks the strongest mean power with id tie-break") {
    // Rural LTE has zero shadowing, so the metric is pure path loss and the
    // nearer site must win.
    const ScenarioConfig cfg = default_config(Scenario::RMa, Tech::Lte);
    Topology topo;
    topo.area_side_m = 1000.0;
    topo.enbs = {{0.0, 0.0}, {600.0, 0.0}};
    Vehicle a;
    a.pos = {500.0, 0.0};  // 500 m vs 100 m
    a.serving_enb = 0;
    Vehicle b;
    b.pos = {300.0, 0.0};  // equidistant, must keep id 0
    b.serving_enb = 1;
    topo.vehicles = {a, b};

    std::vector<Link> links(4);
    for (std::size_t v = 0; v < 2; ++v) {
        for (std::size_t e = 0; e < 2; ++e) {
            links[v * 2 + e].init(cfg, distance(topo.vehicles[v].pos, topo.enbs[e]),
                                  derive_seed(7, v, e), 0.0);
        }
    }
    reassociate(topo, links);
    CHECK(topo.vehicles[0].serving_enb == 1);
    CHECK(topo.vehicles[1].serving_enb == 0);

    CHECK_THROWS(reassociate(topo, std::span<const Link>(links.data(), 3)));
}

TEST_CASE("plane distance") {
    CHECK(distance({0.0, 0.0}, {3.0, 4.0}) == 5.0);
    CHECK(distance({1.0, 1.0}, {1.0, 1.0}) == 0.0);
}
