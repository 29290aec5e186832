#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <vector>

#include "v2isim/config.hpp"
#include "v2isim/rng.hpp"

namespace v2isim {

enum class PacketState { Queued, InFlight, Delivered, Dropped };
enum class TxOutcome { Success, HarqRetry, Fail };

const char* to_string(PacketState s) noexcept;

// Per-packet view used by tests and the packet trace.
struct PacketRecord {
    std::uint64_t id = 0;
    double created_at_s = 0.0;
    double delivered_at_s = std::numeric_limits<double>::quiet_NaN();
    int attempts = 0;
    PacketState state = PacketState::Queued;
    int size_bytes = 0;
};

// MAC/RLC constants of a campaign point.
struct StackParams {
    double slot_s = 1.0e-3;             // 1 ms LTE, 125 us mmWave
    double harq_rtt_s = 8.0e-3;         // 8 slots LTE, 4 slots mmWave
    int harq_max = 4;                   // attempts before RLC takes over
    double bler = 1.0e-2;               // error rate at the operating point
    double harq_combine_db = 3.0;       // SINR credit per prior attempt
    double reorder_delay_s = 1.0e-3;    // added on RLC re-injection
    double buffer_bytes = 10.0e6;
    int packet_bytes = 1400;
    double interarrival_s = 1.12e-2;
};

StackParams stack_params(const ScenarioConfig& cfg) noexcept;

// One transmission attempt of a fully sent packet. prior_attempts failed
// tries add the combining credit to the effective SINR; below the outage
// threshold the attempt fails outright, otherwise it fails with the residual
// error rate. Failures become HarqRetry until harq_max attempts are spent,
// then Fail (the RLC re-injects).
TxOutcome transmit_attempt(double sinr_db, int prior_attempts, const StackParams& p,
                           SplitMix64& rng);

// Equal time share of one slot among the servable backlogged vehicles:
// vehicle i may drain capacity_i * slot / (8 n) bytes. Zero-capacity flows
// must be excluded by the caller (they cannot use a grant).
std::vector<double> schedule_slot(std::span<const double> capacities_bps, double slot_s);

struct FlowCounters {
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t queued = 0;     // left in the buffer, filled by finalize()
    std::uint64_t in_flight = 0;  // partially transmitted head, by finalize()

    double delivered_bytes_window = 0.0;
    std::uint64_t delivered_window = 0;
    std::uint64_t dropped_window = 0;
    double latency_sum_window_s = 0.0;
};

// Downlink bearer of one vehicle: CBR source, drop-tail RLC buffer, HARQ on
// the head of line, in-order delivery. The queue stores id and creation
// timestamp per packet; the buffer limit caps its length.
class VehicleFlow {
  public:
    void init(int vehicle_id, const StackParams& p, double first_arrival_s);

    // Generates every CBR arrival with timestamp <= now, applying drop-tail.
    void generate_until(double now_s);

    // True when the head of line exists and its HARQ/RLC hold time expired.
    bool servable(double now_s) const noexcept;

    std::size_t queue_packets() const noexcept { return created_.size(); }
    double queue_bytes() const noexcept;
    bool head_partially_sent() const noexcept { return head_sent_bytes_ > 0.0; }

    // Drains up to granted_bytes from the head of line during the slot
    // starting at slot_start_s. Completed packets run one HARQ attempt at the
    // slot's SINR; deliveries are stamped at the end of the slot. A retry or
    // re-injection stops service for the rest of the slot.
    void serve(double slot_start_s, double slot_s, double granted_bytes, double sinr_db,
               SplitMix64& rng);

    // Measurement window for the *_window counters.
    void set_window(double begin_s, double end_s) noexcept;

    // When set, every packet that reaches a final state (and, after
    // finalize(), every packet still in the buffer) is appended here.
    void set_trace(std::vector<PacketRecord>* sink) noexcept { trace_ = sink; }

    // Fills the queued/in_flight counters from the remaining buffer contents
    // and flushes unfinished packets to the trace.
    void finalize();

    const FlowCounters& counters() const noexcept { return counters_; }
    int vehicle_id() const noexcept { return vehicle_id_; }
    double total_delivered_bytes() const noexcept { return delivered_bytes_total_; }

  private:
    void record(std::uint64_t id, double created, double delivered, int attempts,
                PacketState state);

    StackParams p_{};
    int vehicle_id_ = 0;
    std::deque<double> created_;      // creation time per queued packet, FIFO
    std::deque<std::uint64_t> ids_;   // packet id per queued packet, FIFO
    std::uint64_t next_id_ = 0;       // id of the next packet to generate
    double next_arrival_s_ = 0.0;
    double head_sent_bytes_ = 0.0;
    int head_attempts_ = 0;
    double head_ready_at_s_ = 0.0;
    double delivered_bytes_total_ = 0.0;
    double window_begin_s_ = 0.0;
    double window_end_s_ = std::numeric_limits<double>::infinity();
    FlowCounters counters_{};
    std::vector<PacketRecord>* trace_ = nullptr;
};

}  // namespace v2isim
