#include "v2isim/stack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "v2isim/radio.hpp"

namespace v2isim {

namespace {
// Fractional byte grants accumulate; remainders below this count as done.
constexpr double kByteEps = 1.0e-9;
}  // namespace

const char* to_string(PacketState s) noexcept {
    switch (s) {
        case PacketState::Queued:
            return "queued";
        case PacketState::InFlight:
            return "in_flight";
        case PacketState::Delivered:
            return "delivered";
        case PacketState::Dropped:
            return "dropped";
    }
    return "?";
}

StackParams stack_params(const ScenarioConfig& cfg) noexcept {
    StackParams p;
    p.slot_s = cfg.tech == Tech::Lte ? 1.0e-3 : 125.0e-6;
    p.harq_rtt_s = (cfg.tech == Tech::Lte ? 8.0 : 4.0) * p.slot_s;
    p.reorder_delay_s = cfg.rlc_reorder_delay_s;
    p.buffer_bytes = cfg.rlc_buffer_bytes;
    p.packet_bytes = cfg.packet_size_bytes;
    p.interarrival_s = interarrival_s(cfg);
    return p;
}

TxOutcome transmit_attempt(double sinr_db, int prior_attempts, const StackParams& p,
                           SplitMix64& rng) {
    const double effective_db = sinr_db + prior_attempts * p.harq_combine_db;
    bool failed;
    if (effective_db < kSinrOutageDb) {
        failed = true;
    } else {
        failed = uniform01(rng) < p.bler;
    }
    if (!failed) {
        return TxOutcome::Success;
    }
    return prior_attempts + 1 >= p.harq_max ? TxOutcome::Fail : TxOutcome::HarqRetry;
}

std::vector<double> schedule_slot(std::span<const double> capacities_bps, double slot_s) {
    std::vector<double> grants(capacities_bps.size(), 0.0);
    if (capacities_bps.empty()) {
        return grants;
    }
    const double share = slot_s / (8.0 * static_cast<double>(capacities_bps.size()));
    for (std::size_t i = 0; i < capacities_bps.size(); ++i) {
        if (capacities_bps[i] <= 0.0) {
            throw std::invalid_argument("schedule_slot: zero-capacity flow in the slot");
        }
        grants[i] = capacities_bps[i] * share;
    }
    return grants;
}

void VehicleFlow::init(int vehicle_id, const StackParams& p, double first_arrival_s) {
    p_ = p;
    vehicle_id_ = vehicle_id;
    next_arrival_s_ = first_arrival_s;
}

void VehicleFlow::record(std::uint64_t id, double created, double delivered, int attempts,
                         PacketState state) {
    if (trace_ == nullptr) {
        return;
    }
    PacketRecord r;
    r.id = id;
    r.created_at_s = created;
    r.delivered_at_s = delivered;
    r.attempts = attempts;
    r.state = state;
    r.size_bytes = p_.packet_bytes;
    trace_->push_back(r);
}

void VehicleFlow::generate_until(double now_s) {
    const double capacity_packets = std::floor(p_.buffer_bytes / p_.packet_bytes);
    while (next_arrival_s_ <= now_s) {
        const std::uint64_t id = next_id_++;
        ++counters_.generated;
        if (static_cast<double>(created_.size()) < capacity_packets) {
            created_.push_back(next_arrival_s_);
            ids_.push_back(id);
        } else {
            ++counters_.dropped;
            if (next_arrival_s_ > window_begin_s_ && next_arrival_s_ <= window_end_s_) {
                ++counters_.dropped_window;
            }
            record(id, next_arrival_s_, std::numeric_limits<double>::quiet_NaN(), 0,
                   PacketState::Dropped);
        }
        next_arrival_s_ += p_.interarrival_s;
    }
}

bool VehicleFlow::servable(double now_s) const noexcept {
    return !created_.empty() && head_ready_at_s_ <= now_s;
}

double VehicleFlow::queue_bytes() const noexcept {
    return static_cast<double>(created_.size()) * p_.packet_bytes - head_sent_bytes_;
}

void VehicleFlow::serve(double slot_start_s, double slot_s, double granted_bytes, double sinr_db,
                        SplitMix64& rng) {
    while (granted_bytes > kByteEps && servable(slot_start_s)) {
        const double remaining = p_.packet_bytes - head_sent_bytes_;
        const double sent = std::min(remaining, granted_bytes);
        head_sent_bytes_ += sent;
        granted_bytes -= sent;
        if (p_.packet_bytes - head_sent_bytes_ > kByteEps) {
            return;  // head still incomplete, grant exhausted
        }

        const TxOutcome outcome = transmit_attempt(sinr_db, head_attempts_, p_, rng);
        ++head_attempts_;
        if (outcome == TxOutcome::Success) {
            const double delivered_at = slot_start_s + slot_s;
            const double created = created_.front();
            ++counters_.delivered;
            delivered_bytes_total_ += p_.packet_bytes;
            if (delivered_at > window_begin_s_ && delivered_at <= window_end_s_) {
                ++counters_.delivered_window;
                counters_.delivered_bytes_window += p_.packet_bytes;
                counters_.latency_sum_window_s += delivered_at - created;
            }
            record(ids_.front(), created, delivered_at, head_attempts_, PacketState::Delivered);
            created_.pop_front();
            ids_.pop_front();
            head_sent_bytes_ = 0.0;
            head_attempts_ = 0;
            head_ready_at_s_ = 0.0;
        } else if (outcome == TxOutcome::HarqRetry) {
            // Retransmission resends the whole transport block after one RTT.
            head_sent_bytes_ = 0.0;
            head_ready_at_s_ = slot_start_s + p_.harq_rtt_s;
            return;
        } else {
            // HARQ gave up: the RLC re-injects the packet at the head of line
            // with a fresh HARQ process after the reordering delay.
            head_sent_bytes_ = 0.0;
            head_attempts_ = 0;
            head_ready_at_s_ = slot_start_s + p_.harq_rtt_s + p_.reorder_delay_s;
            return;
        }
    }
}

void VehicleFlow::set_window(double begin_s, double end_s) noexcept {
    window_begin_s_ = begin_s;
    window_end_s_ = end_s;
}

void VehicleFlow::finalize() {
    const bool head_in_flight = !created_.empty() && head_partially_sent();
    counters_.in_flight = head_in_flight ? 1 : 0;
    counters_.queued = created_.size() - counters_.in_flight;
    if (trace_ != nullptr) {
        for (std::size_t i = 0; i < created_.size(); ++i) {
            const bool in_flight = i == 0 && head_in_flight;
            record(ids_[i], created_[i], std::numeric_limits<double>::quiet_NaN(),
                   in_flight ? head_attempts_ : 0,
                   in_flight ? PacketState::InFlight : PacketState::Queued);
        }
    }
}

}  // namespace v2isim
