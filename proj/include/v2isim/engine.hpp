#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <utility>
#include <vector>

#include "v2isim/config.hpp"
#include "v2isim/geometry.hpp"
#include "v2isim/stack.hpp"

namespace v2isim {

// Deterministic discrete-event queue. Events pop in non-decreasing time;
// equal times pop in insertion order. Time is an integer (microseconds in the
// engine), so recurring cadences never suffer float drift.
template <typename Payload>
class EventQueue {
  public:
    struct Item {
        std::int64_t time;
        std::uint64_t seq;
        Payload payload;
    };

    void push(std::int64_t time, Payload payload) {
        if (time < now_) {
            throw std::logic_error("event scheduled in the past");
        }
        items_.push_back(Item{time, next_seq_++, std::move(payload)});
        std::push_heap(items_.begin(), items_.end(), later);
    }

    Item pop() {
        if (items_.empty()) {
            throw std::logic_error("pop from empty event queue");
        }
        std::pop_heap(items_.begin(), items_.end(), later);
        Item item = std::move(items_.back());
        items_.pop_back();
        now_ = item.time;
        return item;
    }

    bool empty() const noexcept { return items_.empty(); }
    std::size_t size() const noexcept { return items_.size(); }
    std::int64_t now() const noexcept { return now_; }

  private:
    static bool later(const Item& a, const Item& b) noexcept {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }

    std::vector<Item> items_;
    std::uint64_t next_seq_ = 0;
    std::int64_t now_ = 0;
};

// Optional CSV sinks for debugging traces. Null streams disable a trace.
struct TraceSinks {
    std::ostream* topology = nullptr;
    std::ostream* links = nullptr;
    std::ostream* packets = nullptr;
};

struct VehicleResult {
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t queued_end = 0;
    std::uint64_t in_flight_end = 0;
    double delivered_bytes_window = 0.0;
    std::uint64_t delivered_window = 0;
    std::uint64_t dropped_window = 0;
    double latency_sum_window_s = 0.0;
    int serving_enb_end = 0;
};

struct RunResult {
    int run_index = 0;
    std::uint64_t seed = 0;
    double window_s = 0.0;  // measured span, duration - warmup
    int n_enbs = 0;
    std::vector<VehicleResult> vehicles;
    double wall_s = 0.0;
};

// Per-vehicle packet conservation: generated == delivered + dropped + queued
// + in flight. Throws std::logic_error when violated.
void check_conservation(const RunResult& result);

// One simulation run on a caller-supplied topology (exposed for tests that
// need a hand-built deployment).
RunResult run_with_topology(const ScenarioConfig& cfg, Topology topology, std::uint64_t run_seed,
                            int run_index = 0, const TraceSinks* trace = nullptr);

// One run of the campaign: builds the topology from the config (eNB PPP
// conditioned on at least one point, vehicle drop, urban building grid) with
// the substream seed derived from (master_seed, run_index), then simulates.
RunResult run_once(const ScenarioConfig& cfg, int run_index, const TraceSinks* trace = nullptr);

// N independent runs, results ordered by run index. parallel > 1 distributes
// runs across threads; the results are identical to the serial ones because
// every run derives its own seed tree and shares no mutable state.
std::vector<RunResult> run_campaign(const ScenarioConfig& cfg, int n_runs, int parallel = 1,
                                    const std::function<void(int)>& on_run_done = {});

}  // namespace v2isim
