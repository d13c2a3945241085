#pragma once

#include <cstddef>
#include <span>

#include "mobilab/contact.hpp"
#include "mobilab/scenario.hpp"

namespace mobilab {

struct MetricReport {
    double avg_node_degree = 0.0;       // ND, nodes
    double avg_partitions = 0.0;        // NP, components
    std::size_t link_changes = 0;       // LC, transitions over all pairs
    double link_changes_per_pair = 0.0; // LC / number of node pairs
    double avg_link_duration = 0.0;     // LD, seconds
    double avg_relative_speed = 0.0;    // RS, m/s
    double sample_interval = 0.0;
    double radio_range = 0.0;
    std::size_t node_count = 0;
    std::size_t samples = 0;

    friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

// Connected components of one snapshot (union-find).
std::size_t count_components(const AdjacencySnapshot& snapshot);

// Mean neighbour count over every node and sample.
double node_degree(std::span<const AdjacencySnapshot> snapshots);

// Mean connected-component count over samples.
double network_partitions(std::span<const AdjacencySnapshot> snapshots);

struct LinkChangeCount {
    std::size_t total = 0;
    double per_pair = 0.0;
};

// Up/down transitions across the sampling grid. Runs that begin at t = 0 or
// end at the simulation end miss the corresponding transition.
LinkChangeCount link_changes(const ContactTimeline& timeline);

// Mean length of all up-intervals (censored at the ends); 0 without links.
double link_duration(const ContactTimeline& timeline);

// Mean |v_j(t) - v_k(t)| over all (linked pair, sample) observations.
double relative_speed(const Scenario& scenario, const ContactTimeline& timeline,
                      double sample_interval);

// Validates the scenario (throws UsageError listing violations), samples it
// once and computes all five metrics.
MetricReport compute_all(const Scenario& scenario, double range, double sample_interval);

}  // namespace mobilab
