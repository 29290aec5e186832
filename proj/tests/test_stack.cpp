#include <doctest.h>

#include <cmath>
#include <vector>

#include "v2isim/stack.hpp"

using namespace v2isim;

namespace {

StackParams test_params() {
    StackParams p;
    p.slot_s = 1.0e-3;
    p.harq_rtt_s = 8.0e-3;
    p.reorder_delay_s = 1.0e-3;
    p.buffer_bytes = 10.0e6;
    p.packet_bytes = 1400;
    p.interarrival_s = 0.0112;
    return p;
}

}  // namespace

TEST_CASE("stack constants follow the technology numerology") {
    ScenarioConfig cfg = default_config(Scenario::UMi, Tech::Lte);
    StackParams lte = stack_params(cfg);
    CHECK(lte.slot_s == 1.0e-3);
    CHECK(lte.harq_rtt_s == 8.0e-3);
    CHECK(lte.interarrival_s == doctest::Approx(0.0112));

    cfg = default_config(Scenario::UMi, Tech::MmWave);
    cfg.app_rate_bps = 224.0e6;
    StackParams mmw = stack_params(cfg);
    CHECK(mmw.slot_s == 125.0e-6);
    CHECK(mmw.harq_rtt_s == 500.0e-6);
    CHECK(mmw.interarrival_s == doctest::Approx(5.0e-5));
    CHECK(mmw.harq_max == 4);
    CHECK(mmw.bler == 1.0e-2);
}

TEST_CASE("transmission attempts fail at the block error rate") {
    SplitMix64 rng(3);
    const StackParams p = test_params();

    int failures = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        if (transmit_attempt(20.0, 0, p, rng) != TxOutcome::Success) {
            ++failures;
        }
    }
    const double se = std::sqrt(p.bler * (1.0 - p.bler) / n);
    CHECK(std::abs(static_cast<double>(failures) / n - p.bler) < 4.0 * se);
}

TEST_CASE("attempts below the outage threshold cannot succeed") {
    SplitMix64 rng(4);
    const StackParams p = test_params();
    CHECK(transmit_attempt(-20.0, 0, p, rng) == TxOutcome::HarqRetry);
    CHECK(transmit_attempt(-20.0, 1, p, rng) == TxOutcome::HarqRetry);
    CHECK(transmit_attempt(-20.0, 2, p, rng) == TxOutcome::HarqRetry);
    // The fourth try is the last one.
    CHECK(transmit_attempt(-20.0, 3, p, rng) == TxOutcome::Fail);
}

TEST_CASE("retransmission combining credits 3 dB per prior attempt") {
    SplitMix64 rng(5);
    StackParams p = test_params();
    p.bler = 0.0;  // isolates the outage threshold
    // -7.5 dB is below the -5 dB threshold; one credit lifts it to -4.5 dB.
    CHECK(transmit_attempt(-7.5, 0, p, rng) == TxOutcome::HarqRetry);
    CHECK(transmit_attempt(-7.5, 1, p, rng) == TxOutcome::Success);
}

TEST_CASE("a slot is shared equally in time, not in bytes") {
    const std::vector<double> capacities{8.0e6, 16.0e6};
    const auto grants = schedule_slot(capacities, 1.0e-3);
    REQUIRE(grants.size() == 2);
    // Each flow gets half the slot at its own rate.
    CHECK(grants[0] == doctest::Approx(500.0));
    CHECK(grants[1] == doctest::Approx(1000.0));

    CHECK(schedule_slot({}, 1.0e-3).empty());
    CHECK_THROWS(schedule_slot(std::vector<double>{8.0e6, 0.0}, 1.0e-3));
}

TEST_CASE("constant-bit-rate source generates on schedule") {
    VehicleFlow flow;
    flow.init(0, test_params(), 0.005);
    flow.generate_until(0.05);
    // Arrivals at 0.005 + k * 0.0112 up to 0.05: k = 0..4.
    CHECK(flow.counters().generated == 5);
    CHECK(flow.queue_packets() == 5);
    CHECK(flow.queue_bytes() == 5 * 1400.0);

    flow.generate_until(0.05);  // idempotent at the same time
    CHECK(flow.counters().generated == 5);
}

TEST_CASE("full buffers drop arrivals at the tail") {
    StackParams p = test_params();
    p.buffer_bytes = 3.0 * 1400.0;  // room for exactly three packets
    VehicleFlow flow;
    flow.init(0, p, 0.0);
    flow.generate_until(0.05);  // five arrivals
    CHECK(flow.counters().generated == 5);
    CHECK(flow.queue_packets() == 3);
    CHECK(flow.counters().dropped == 2);

    flow.finalize();
    const FlowCounters& c = flow.counters();
    CHECK(c.generated == c.delivered + c.dropped + c.queued + c.in_flight);
}

TEST_CASE("delivery stamps the slot end and counts the window") {
    StackParams p = test_params();
    p.bler = 0.0;
    SplitMix64 rng(6);
    VehicleFlow flow;
    flow.init(0, p, 0.0);
    flow.set_window(0.0, 1.0);
    std::vector<PacketRecord> trace;
    flow.set_trace(&trace);

    flow.generate_until(0.0);  // one packet, created at t = 0
    REQUIRE(flow.servable(0.002));
    flow.serve(0.002, p.slot_s, 1400.0, 20.0, rng);

    CHECK(flow.counters().delivered == 1);
    CHECK(flow.queue_packets() == 0);
    CHECK(flow.counters().delivered_bytes_window == 1400.0);
    CHECK(flow.counters().latency_sum_window_s == doctest::Approx(0.003));  // 0.002 + slot

    REQUIRE(trace.size() == 1);
    CHECK(trace[0].state == PacketState::Delivered);
    CHECK(trace[0].attempts == 1);
    CHECK(trace[0].created_at_s == 0.0);
    CHECK(trace[0].delivered_at_s == doctest::Approx(0.003));
}

TEST_CASE("partial grants accumulate on the head of line") {
    StackParams p = test_params();
    p.bler = 0.0;
    SplitMix64 rng(7);
    VehicleFlow flow;
    flow.init(0, p, 0.0);
    flow.generate_until(0.0);

    flow.serve(0.001, p.slot_s, 700.0, 20.0, rng);
    CHECK(flow.counters().delivered == 0);
    CHECK(flow.head_partially_sent());
    CHECK(flow.queue_bytes() == doctest::Approx(700.0));

    flow.serve(0.002, p.slot_s, 700.0, 20.0, rng);
    CHECK(flow.counters().delivered == 1);
    CHECK_FALSE(flow.head_partially_sent());
}

TEST_CASE("one grant can deliver several queued packets") {
    StackParams p = test_params();
    p.bler = 0.0;
    SplitMix64 rng(8);
    VehicleFlow flow;
    flow.init(0, p, 0.0);
    flow.generate_until(0.03);  // three packets queued
    REQUIRE(flow.queue_packets() == 3);

    flow.serve(0.03, p.slot_s, 3.0 * 1400.0, 20.0, rng);
    CHECK(flow.counters().delivered == 3);
    CHECK(flow.queue_packets() == 0);
}

TEST_CASE("failed attempts hold the head for the HARQ round trip") {
    StackParams p = test_params();
    p.bler = 1.0;  // every attempt fails
    SplitMix64 rng(9);
    VehicleFlow flow;
    flow.init(0, p, 0.0);
    flow.generate_until(0.0);

    double t = 0.001;
    flow.serve(t, p.slot_s, 1400.0, 20.0, rng);  // attempt 1
    CHECK(flow.counters().delivered == 0);
    CHECK_FALSE(flow.head_partially_sent());  // retransmission resends in full
    CHECK_FALSE(flow.servable(t + p.harq_rtt_s - 1.0e-6));
    CHECK(flow.servable(t + p.harq_rtt_s));

    // Attempts 2..4 fail too; the fourth is the HARQ give-up, after which the
    // head waits one more round trip plus the reordering delay.
    for (int attempt = 2; attempt <= 4; ++attempt) {
        t += p.harq_rtt_s;
        REQUIRE(flow.servable(t));
        flow.serve(t, p.slot_s, 1400.0, 20.0, rng);
    }
    CHECK_FALSE(flow.servable(t + p.harq_rtt_s));  // reorder delay still holds it
    CHECK(flow.servable(t + p.harq_rtt_s + p.reorder_delay_s));
    CHECK(flow.counters().delivered == 0);
    CHECK(flow.queue_packets() == 1);  // still at the head, conserved

    flow.finalize();
    const FlowCounters& c = flow.counters();
    CHECK(c.generated == c.delivered + c.dropped + c.queued + c.in_flight);
}

TEST_CASE("head-of-line blocking keeps later packets untouched") {
    StackParams p = test_params();
    p.bler = 1.0;
    SplitMix64 rng(10);
    VehicleFlow flow;
    flow.init(0, p, 0.0);
    flow.generate_until(0.03);
    REQUIRE(flow.queue_packets() == 3);

    flow.serve(0.03, p.slot_s, 10.0 * 1400.0, 20.0, rng);
    // The failed head stops the slot; nothing behind it moves.
    CHECK(flow.queue_packets() == 3);
    CHECK_FALSE(flow.head_partially_sent());
}

TEST_CASE("deliveries outside the window do not count toward it") {
    StackParams p = test_params();
    p.bler = 0.0;
    SplitMix64 rng(11);
    VehicleFlow flow;
    flow.init(0, p, 0.0);
    flow.set_window(1.0, 2.0);

    flow.generate_until(0.0);
    flow.serve(0.001, p.slot_s, 1400.0, 20.0, rng);  // delivered at 0.002
    CHECK(flow.counters().delivered == 1);
    CHECK(flow.counters().delivered_window == 0);
    CHECK(flow.counters().delivered_bytes_window == 0.0);
    CHECK(flow.total_delivered_bytes() == 1400.0);
}

TEST_CASE("finalize labels the partially sent head as in flight") {
    StackParams p = test_params();
    p.bler = 0.0;
    SplitMix64 rng(12);
    VehicleFlow flow;
    flow.init(0, p, 0.0);
    std::vector<PacketRecord> trace;
    flow.set_trace(&trace);

    flow.generate_until(0.02);  // two packets
    flow.serve(0.02, p.slot_s, 700.0, 20.0, rng);
    flow.finalize();

    CHECK(flow.counters().in_flight == 1);
    CHECK(flow.counters().queued == 1);
    REQUIRE(trace.size() == 2);
    CHECK(trace[0].state == PacketState::InFlight);
    CHECK(trace[1].state == PacketState::Queued);
}
