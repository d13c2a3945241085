#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mobilab/random.hpp"
#include "mobilab/scenario.hpp"

namespace mobilab {

// CBR source: fixed-size packets at a fixed rate over [start, stop).
struct Flow {
    int source = 0;
    int destination = 0;
    int packet_size = 512;  // bytes
    double rate = 4.0;      // packets/s
    double start = 0.0;
    double stop = 0.0;
};

// Traffic pattern and routing-run duration.
struct TrafficConfig {
    int connections = 15;
    int packet_size = 512;
    double rate = 4.0;
    double start_spread = 10.0;  // starts uniform in [0, start_spread]
    double duration = 300.0;
};

struct SimParams {
    double data_rate = 2e6;              // bits/s
    double per_hop_processing = 1e-3;    // s
    int rreq_ttl_max = 0;                // hops; 0 means node_count
    double route_lifetime = 10.0;        // s
    double discovery_timeout = 1.0;      // s per attempt
    int max_buffered_per_flow = 64;      // packets
    int rreq_retries = 2;
    double broadcast_jitter_max = 0.01;  // s
    // After a discovery exhausts its retries, no new request for that
    // destination is sent for this long; packets meanwhile wait in the buffer.
    double rreq_holddown = 10.0;         // s
    double routing_radio_range = 250.0;  // m
};

// Throws ConfigError naming the offending field.
void check_params(const SimParams& params);

// Distinct (source, destination) pairs drawn without replacement.
// Throws ConfigError when node_count cannot supply `connections` pairs.
std::vector<Flow> build_flows(int node_count, const TrafficConfig& traffic, RandomStream& rng);

struct DropCounts {
    std::size_t discovery_failed = 0;  // route discovery exhausted its retries
    std::size_t buffer_overflow = 0;   // discovery buffer full
    std::size_t link_break = 0;        // next hop out of range at transmit time
    std::size_t no_route = 0;          // relay had no valid route, or hop limit hit
    std::size_t unfinished = 0;        // still buffered or in flight when the run ended

    std::size_t total() const {
        return discovery_failed + buffer_overflow + link_break + no_route + unfinished;
    }
};

// Raw tallies from one run.
struct PerfCounters {
    std::size_t sent = 0;
    std::size_t delivered = 0;
    std::size_t routing_packets = 0;  // control transmissions, one per hop
    double total_delay = 0.0;         // summed over delivered packets
    DropCounts drops;
};

struct PerfReport {
    double pdr = 0.0;                // percent
    double avg_delay = 0.0;          // seconds
    std::optional<double> nrl;       // empty when nothing was delivered
    std::size_t sent = 0;
    std::size_t delivered = 0;
    std::size_t routing_packets = 0;
    DropCounts drops;
    double routing_radio_range = 0.0;
};

PerfReport compute_perf(const PerfCounters& counters);

// Per-packet record of a delivered data packet.
struct Delivery {
    int flow = 0;
    std::uint64_t sequence = 0;
    double created = 0.0;
    double delivered = 0.0;
    int hops = 0;

    double delay() const { return delivered - created; }
};

struct SimLog {
    std::vector<Delivery> deliveries;
    // Time at which each flow's source first held a valid route.
    std::vector<std::optional<double>> first_route;
};

// Event-driven CBR/UDP run over an AODV-style reactive protocol on an
// idealised MAC. Throws UsageError/ConfigError on malformed inputs.
PerfReport run_simulation(const Scenario& scenario, std::span<const Flow> flows,
                          const SimParams& params, RandomStream& rng, SimLog* log = nullptr);

}  // namespace mobilab
