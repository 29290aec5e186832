#include <doctest.h>

#include <algorithm>
#include <string>

#include "v2isim/config.hpp"

using namespace v2isim;

namespace {

bool has_issue(const std::vector<ValidationIssue>& issues, ConfigError code) {
    return std::any_of(issues.begin(), issues.end(),
                       [code](const ValidationIssue& i) { return i.code == code; });
}

}  // namespace

TEST_CASE("default configs carry the per-technology radio parameters") {
    const ScenarioConfig lte = default_config(Scenario::UMi, Tech::Lte);
    CHECK(lte.carrier_hz == 2.0e9);
    CHECK(lte.bandwidth_hz == 20.0e6);
    CHECK(lte.enb_array.elements() == 1);
    CHECK(lte.vehicle_array.elements() == 1);
    CHECK(lte.vehicle_speed_mps == doctest::Approx(8.33));

    const ScenarioConfig mmw = default_config(Scenario::RMa, Tech::MmWave);
    CHECK(mmw.carrier_hz == 28.0e9);
    CHECK(mmw.bandwidth_hz == 1.0e9);
    CHECK(mmw.enb_array.elements() == 64);
    CHECK(mmw.vehicle_array.elements() == 16);
    CHECK(mmw.vehicle_speed_mps == doctest::Approx(33.3));

    CHECK(lte.tx_power_dbm == mmw.tx_power_dbm);
    CHECK(lte.noise_figure_db == mmw.noise_figure_db);
    CHECK(validate(lte).empty());
    CHECK(validate(mmw).empty());
}

TEST_CASE("constant-bit-rate spacing follows packet size over rate") {
    ScenarioConfig cfg = default_config(Scenario::UMi, Tech::Lte);
    CHECK(interarrival_s(cfg) == doctest::Approx(0.0112));  // 1400 B at 1 Mb/s
    cfg.app_rate_bps = 224.0e6;
    CHECK(interarrival_s(cfg) == doctest::Approx(5.0e-5));
    cfg.app_rate_bps = 11.0e6;
    CHECK(interarrival_s(cfg) == doctest::Approx(8.0 * 1400.0 / 11.0e6));
}

TEST_CASE("validation flags each broken field") {
    ScenarioConfig cfg = default_config(Scenario::UMi, Tech::Lte);
    cfg.area_side_m = 0.0;
    cfg.enb_density_per_km2 = -1.0;
    cfg.vehicles_per_enb = -2;
    cfg.app_rate_bps = 0.0;
    auto issues = validate(cfg);
    CHECK(has_issue(issues, ConfigError::NonPositiveArea));
    CHECK(has_issue(issues, ConfigError::NonPositiveDensity));
    CHECK(has_issue(issues, ConfigError::NegativeVehiclesPerEnb));
    CHECK(has_issue(issues, ConfigError::NonPositiveRate));

    SUBCASE("warmup must fit inside the run") {
        cfg = default_config(Scenario::UMi, Tech::Lte);
        cfg.warmup_s = cfg.run_duration_s;
        CHECK(has_issue(validate(cfg), ConfigError::WarmupExceedsDuration));
    }

    SUBCASE("array fields must match the technology") {
        cfg = default_config(Scenario::UMi, Tech::Lte);
        cfg.enb_array = {8, 8};
        CHECK(has_issue(validate(cfg), ConfigError::LteWithArray));

        cfg = default_config(Scenario::UMi, Tech::MmWave);
        cfg.enb_array = {1, 1};
        CHECK(has_issue(validate(cfg), ConfigError::MmWaveWithoutArray));

        cfg = default_config(Scenario::UMi, Tech::MmWave);
        cfg.vehicle_array = {0, 4};
        CHECK(has_issue(validate(cfg), ConfigError::NonPositiveArray));
    }
}

TEST_CASE("JSON serialization round trips every field") {
    ScenarioConfig cfg = default_config(Scenario::RMa, Tech::MmWave);
    cfg.enb_density_per_km2 = 17.5;
    cfg.app_rate_bps = 11.0e6;
    cfg.n_runs = 3;
    cfg.master_seed = 123456789;
    cfg.scheduler = Scheduler::EqualThroughput;
    cfg.fading_iid = true;
    cfg.warmup_s = 0.25;

    const ScenarioConfig back = config_from_json(to_json_string(cfg));
    CHECK(back == cfg);
}

TEST_CASE("partial JSON starts from the pair defaults") {
    const ScenarioConfig cfg =
        config_from_json(R"({"scenario": "umi", "tech": "mmwave", "enb_density_per_km2": 80})");
    CHECK(cfg.scenario == Scenario::UMi);
    CHECK(cfg.tech == Tech::MmWave);
    CHECK(cfg.enb_density_per_km2 == 80.0);
    CHECK(cfg.carrier_hz == 28.0e9);  // untouched default of the pair
    CHECK(cfg.enb_array.elements() == 64);
}

TEST_CASE("malformed JSON and unknown labels are rejected") {
    CHECK_THROWS(config_from_json("{"));
    CHECK_THROWS(config_from_json(R"({"scenario": "suburban", "tech": "lte"})"));
    CHECK_THROWS(config_from_json(R"({"scenario": "umi", "tech": "wifi"})"));
    CHECK_THROWS(load_config_file("/nonexistent/path.json"));
}

TEST_CASE("enum labels parse back to their values") {
    Scenario s;
    Tech t;
    Scheduler sch;
    CHECK(parse_scenario(to_string(Scenario::RMa), s));
    CHECK(s == Scenario::RMa);
    CHECK(parse_tech(to_string(Tech::MmWave), t));
    CHECK(t == Tech::MmWave);
    CHECK(parse_scheduler(to_string(Scheduler::EqualThroughput), sch));
    CHECK(sch == Scheduler::EqualThroughput);
    CHECK_FALSE(parse_scenario("urban", s));
    CHECK_FALSE(parse_tech("5g", t));
    CHECK_FALSE(parse_scheduler("proportional_fair", sch));
}
