#include "v2isim/engine.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

#include "v2isim/channel.hpp"
#include "v2isim/radio.hpp"

namespace v2isim {

namespace {

enum class EventKind { Tick, Slot };

constexpr std::int64_t kTickUs = 1000;
constexpr std::int64_t kReassocUs = 100000;

std::int64_t slot_us(Tech t) noexcept { return t == Tech::Lte ? 1000 : 125; }

void write_topology_trace(std::ostream& out, const Topology& topo) {
    out << "kind,id,x_m,y_m,serving_enb\n";
    char line[128];
    for (std::size_t e = 0; e < topo.enbs.size(); ++e) {
        std::snprintf(line, sizeof line, "enb,%zu,%.3f,%.3f,-1\n", e, topo.enbs[e].x,
                      topo.enbs[e].y);
        out << line;
    }
    for (std::size_t v = 0; v < topo.vehicles.size(); ++v) {
        std::snprintf(line, sizeof line, "vehicle,%zu,%.3f,%.3f,%d\n", v, topo.vehicles[v].pos.x,
                      topo.vehicles[v].pos.y, topo.vehicles[v].serving_enb);
        out << line;
    }
}

// One run's mutable state. Slots and channel ticks are the only event kinds;
// reassociation rides on the tick whose time is a multiple of the cadence, so
// it always sees that tick's fresh link states.
struct RunContext {
    const ScenarioConfig& cfg;
    Topology& topo;
    const TraceSinks* trace;

    StackParams params;
    std::vector<Link> links;
    std::vector<VehicleFlow> flows;
    std::vector<std::vector<PacketRecord>> packet_buf;
    std::vector<std::vector<int>> cell_members;
    SplitMix64 mac_rng{0};

    double serving_tx_gain = 0.0;
    double serving_rx_gain = 0.0;
    std::int64_t end_us = 0;

    // Scratch reused across slots.
    std::vector<char> transmitting;
    std::vector<InterfererSignal> interferers;
    std::vector<int> candidates;
    std::vector<double> capacities;
    std::vector<double> sinrs;

    RunContext(const ScenarioConfig& c, Topology& t, const TraceSinks* tr)
        : cfg(c), topo(t), trace(tr) {}

    std::size_t n_enbs() const noexcept { return topo.enbs.size(); }
    Link& link(std::size_t v, std::size_t e) noexcept { return links[v * n_enbs() + e]; }

    void setup(std::uint64_t run_seed) {
        params = stack_params(cfg);
        end_us = std::llround(cfg.run_duration_s * 1.0e6);
        serving_tx_gain = max_antenna_gain_dbi(cfg.tech, cfg.enb_array);
        serving_rx_gain = max_antenna_gain_dbi(cfg.tech, cfg.vehicle_array);
        mac_rng = SplitMix64(derive_seed(run_seed, 2));

        const std::size_t n_veh = topo.vehicles.size();
        links.resize(n_veh * n_enbs());
        for (std::size_t v = 0; v < n_veh; ++v) {
            for (std::size_t e = 0; e < n_enbs(); ++e) {
                link(v, e).init(cfg, distance(topo.vehicles[v].pos, topo.enbs[e]),
                                derive_seed(run_seed, 1, v, e), 0.0);
            }
        }
        // Blockage lands on the next link update; the gap stays inside warmup.
        refresh_blocked();
        reassociate(topo, links);
        rebuild_cells();

        flows.resize(n_veh);
        SplitMix64 phase_rng(derive_seed(run_seed, 3));
        const bool want_packets = trace != nullptr && trace->packets != nullptr;
        if (want_packets) {
            packet_buf.resize(n_veh);
            *trace->packets << "vehicle,packet,created_s,delivered_s,attempts,state,size_bytes\n";
        }
        for (std::size_t v = 0; v < n_veh; ++v) {
            flows[v].init(static_cast<int>(v), params,
                          uniform01(phase_rng) * params.interarrival_s);
            flows[v].set_window(cfg.warmup_s, cfg.run_duration_s);
            if (want_packets) {
                flows[v].set_trace(&packet_buf[v]);
            }
        }

        transmitting.resize(n_enbs());
        if (trace != nullptr && trace->topology != nullptr) {
            write_topology_trace(*trace->topology, topo);
        }
        if (trace != nullptr && trace->links != nullptr) {
            *trace->links << "time_s,vehicle,enb,distance_m,los,path_loss_db,shadowing_db,"
                             "fading_power\n";
            write_link_trace(0.0);
        }
    }

    void rebuild_cells() {
        cell_members.assign(n_enbs(), {});
        for (std::size_t v = 0; v < topo.vehicles.size(); ++v) {
            cell_members[topo.vehicles[v].serving_enb].push_back(static_cast<int>(v));
        }
    }

    // Urban beamformed interference is shielded by buildings: a crossing
    // footprint forces the NLOS loss on the interfering path.
    void refresh_blocked() {
        if (cfg.scenario != Scenario::UMi || cfg.tech != Tech::MmWave) {
            return;
        }
        for (std::size_t v = 0; v < topo.vehicles.size(); ++v) {
            for (std::size_t e = 0; e < n_enbs(); ++e) {
                link(v, e).set_blocked(crosses_building(topo, topo.vehicles[v].pos, topo.enbs[e]));
            }
        }
    }

    void write_link_trace(double now_s) {
        char line[160];
        for (std::size_t v = 0; v < topo.vehicles.size(); ++v) {
            const std::size_t e = static_cast<std::size_t>(topo.vehicles[v].serving_enb);
            const LinkState& s = link(v, e).state();
            std::snprintf(line, sizeof line, "%.6f,%zu,%zu,%.3f,%d,%.4f,%.4f,%.6f\n", now_s, v, e,
                          s.distance_m, s.los ? 1 : 0, s.path_loss_db, s.shadowing_db,
                          s.fading_power);
            *trace->links << line;
        }
    }

    void drain_packet_trace() {
        if (trace == nullptr || trace->packets == nullptr) {
            return;
        }
        char line[160];
        for (std::size_t v = 0; v < packet_buf.size(); ++v) {
            for (const PacketRecord& r : packet_buf[v]) {
                if (std::isnan(r.delivered_at_s)) {
                    std::snprintf(line, sizeof line, "%zu,%llu,%.6f,,%d,%s,%d\n", v,
                                  static_cast<unsigned long long>(r.id), r.created_at_s,
                                  r.attempts, to_string(r.state), r.size_bytes);
                } else {
                    std::snprintf(line, sizeof line, "%zu,%llu,%.6f,%.6f,%d,%s,%d\n", v,
                                  static_cast<unsigned long long>(r.id), r.created_at_s,
                                  r.delivered_at_s, r.attempts, to_string(r.state), r.size_bytes);
                }
                *trace->packets << line;
            }
            packet_buf[v].clear();
        }
    }

    void handle_tick(std::int64_t time_us) {
        const double now_s = static_cast<double>(time_us) * 1.0e-6;
        const double dt_s = static_cast<double>(kTickUs) * 1.0e-6;
        const double traveled_m = cfg.vehicle_speed_mps * dt_s;
        const std::vector<bool> wrapped = step_mobility(topo, dt_s);
        const bool reassoc_due = time_us % kReassocUs == 0;
        if (reassoc_due) {
            refresh_blocked();
        }
        for (std::size_t v = 0; v < topo.vehicles.size(); ++v) {
            for (std::size_t e = 0; e < n_enbs(); ++e) {
                link(v, e).advance(cfg, distance(topo.vehicles[v].pos, topo.enbs[e]), traveled_m,
                                   now_s, wrapped[v]);
            }
        }
        if (reassoc_due) {
            reassociate(topo, links);
            rebuild_cells();
            if (trace != nullptr && trace->links != nullptr) {
                write_link_trace(now_s);
            }
            drain_packet_trace();
        }
    }

    void handle_slot(std::int64_t time_us) {
        const double now_s = static_cast<double>(time_us) * 1.0e-6;
        const double slot_s = params.slot_s;
        for (VehicleFlow& flow : flows) {
            flow.generate_until(now_s);
        }

        // An eNB transmits the whole slot when it has a head of line to send.
        // The set is fixed before any SINR so interference is well defined.
        for (std::size_t e = 0; e < n_enbs(); ++e) {
            bool busy = false;
            for (int v : cell_members[e]) {
                if (flows[v].servable(now_s)) {
                    busy = true;
                    break;
                }
            }
            transmitting[e] = busy ? 1 : 0;
        }

        for (std::size_t e = 0; e < n_enbs(); ++e) {
            if (!transmitting[e]) {
                continue;
            }
            candidates.clear();
            capacities.clear();
            sinrs.clear();
            for (int v : cell_members[e]) {
                if (!flows[v].servable(now_s)) {
                    continue;
                }
                interferers.clear();
                for (std::size_t other = 0; other < n_enbs(); ++other) {
                    if (other == e || !transmitting[other]) {
                        continue;
                    }
                    const Link& path = link(v, other);
                    InterfererSignal sig;
                    sig.path_loss_db = path.interferer_path_loss_db();
                    sig.shadowing_db = path.state().shadowing_db;
                    sig.fading_power = path.state().fading_power;
                    sig.tx_gain_dbi = antenna_gain_dbi(cfg.tech, cfg.enb_array, false, mac_rng);
                    sig.rx_gain_dbi =
                        antenna_gain_dbi(cfg.tech, cfg.vehicle_array, false, mac_rng);
                    interferers.push_back(sig);
                }
                const LinkBudget budget = compute_sinr(link(v, e).state(), serving_tx_gain,
                                                       serving_rx_gain, interferers, cfg);
                if (budget.capacity_bps > 0.0) {
                    candidates.push_back(v);
                    capacities.push_back(budget.capacity_bps);
                    sinrs.push_back(budget.sinr_db);
                }
            }
            if (candidates.empty()) {
                continue;
            }

            if (cfg.scheduler == Scheduler::RoundRobin) {
                const std::vector<double> grants = schedule_slot(capacities, slot_s);
                for (std::size_t i = 0; i < candidates.size(); ++i) {
                    flows[candidates[i]].serve(now_s, slot_s, grants[i], sinrs[i], mac_rng);
                }
            } else {
                std::size_t pick = 0;
                for (std::size_t i = 1; i < candidates.size(); ++i) {
                    if (flows[candidates[i]].total_delivered_bytes() <
                        flows[candidates[pick]].total_delivered_bytes()) {
                        pick = i;
                    }
                }
                flows[candidates[pick]].serve(now_s, slot_s, capacities[pick] * slot_s / 8.0,
                                              sinrs[pick], mac_rng);
            }
        }
    }

    RunResult finish(int run_index, std::uint64_t run_seed, double wall_s) {
        RunResult result;
        result.run_index = run_index;
        result.seed = run_seed;
        result.window_s = cfg.run_duration_s - cfg.warmup_s;
        result.n_enbs = static_cast<int>(n_enbs());
        result.vehicles.resize(flows.size());
        for (std::size_t v = 0; v < flows.size(); ++v) {
            flows[v].finalize();
            const FlowCounters& c = flows[v].counters();
            VehicleResult& out = result.vehicles[v];
            out.generated = c.generated;
            out.delivered = c.delivered;
            out.dropped = c.dropped;
            out.queued_end = c.queued;
            out.in_flight_end = c.in_flight;
            out.delivered_bytes_window = c.delivered_bytes_window;
            out.delivered_window = c.delivered_window;
            out.dropped_window = c.dropped_window;
            out.latency_sum_window_s = c.latency_sum_window_s;
            out.serving_enb_end = topo.vehicles[v].serving_enb;
        }
        drain_packet_trace();
        result.wall_s = wall_s;
        check_conservation(result);
        return result;
    }
};

}  // namespace

void check_conservation(const RunResult& result) {
    for (std::size_t v = 0; v < result.vehicles.size(); ++v) {
        const VehicleResult& r = result.vehicles[v];
        if (r.generated != r.delivered + r.dropped + r.queued_end + r.in_flight_end) {
            throw std::logic_error("packet conservation violated for vehicle " +
                                   std::to_string(v));
        }
    }
}

RunResult run_with_topology(const ScenarioConfig& cfg, Topology topology, std::uint64_t run_seed,
                            int run_index, const TraceSinks* trace) {
    if (topology.enbs.empty()) {
        throw std::invalid_argument("run_with_topology: topology has no eNBs");
    }
    const auto t0 = std::chrono::steady_clock::now();

    RunContext ctx(cfg, topology, trace);
    ctx.setup(run_seed);

    EventQueue<EventKind> queue;
    queue.push(0, EventKind::Slot);
    if (kTickUs < ctx.end_us) {
        queue.push(kTickUs, EventKind::Tick);
    }
    const std::int64_t step_slot = slot_us(cfg.tech);

    while (!queue.empty()) {
        const auto item = queue.pop();
        if (item.payload == EventKind::Tick) {
            ctx.handle_tick(item.time);
            if (item.time + kTickUs < ctx.end_us) {
                queue.push(item.time + kTickUs, EventKind::Tick);
            }
        } else {
            ctx.handle_slot(item.time);
            if (item.time + step_slot < ctx.end_us) {
                queue.push(item.time + step_slot, EventKind::Slot);
            }
        }
    }

    const double wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return ctx.finish(run_index, run_seed, wall_s);
}

RunResult run_once(const ScenarioConfig& cfg, int run_index, const TraceSinks* trace) {
    const std::uint64_t run_seed =
        derive_seed(cfg.master_seed, static_cast<std::uint64_t>(run_index));
    SplitMix64 topo_rng(derive_seed(run_seed, 0));

    Topology topo;
    topo.area_side_m = cfg.area_side_m;
    // The deployment is conditioned on a non-empty eNB set; an empty draw is
    // resampled so every run has a serving infrastructure.
    do {
        topo.enbs = sample_ppp(cfg.area_side_m, cfg.enb_density_per_km2, topo_rng);
    } while (topo.enbs.empty());
    topo.vehicles = place_vehicles(topo.enbs, cfg.vehicles_per_enb, cfg.scenario,
                                   cfg.vehicle_speed_mps, cfg.area_side_m, topo_rng);
    if (cfg.scenario == Scenario::UMi) {
        topo.buildings = building_grid(cfg.area_side_m);
    }
    return run_with_topology(cfg, std::move(topo), run_seed, run_index, trace);
}

std::vector<RunResult> run_campaign(const ScenarioConfig& cfg, int n_runs, int parallel,
                                    const std::function<void(int)>& on_run_done) {
    if (n_runs <= 0) {
        throw std::invalid_argument("run_campaign: non-positive run count");
    }
    std::vector<RunResult> results(static_cast<std::size_t>(n_runs));
    const int workers = std::min(std::max(parallel, 1), n_runs);
    if (workers == 1) {
        for (int i = 0; i < n_runs; ++i) {
            results[i] = run_once(cfg, i);
            if (on_run_done) {
                on_run_done(i);
            }
        }
        return results;
    }

    std::atomic<int> next{0};
    std::mutex done_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n_runs; i = next.fetch_add(1)) {
                results[i] = run_once(cfg, i);
                if (on_run_done) {
                    std::lock_guard<std::mutex> lock(done_mutex);
                    on_run_done(i);
                }
            }
        });
    }
    for (std::thread& t : pool) {
        t.join();
    }
    return results;
}

}  // namespace v2isim
