#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mobilab/geometry.hpp"
#include "mobilab/scenario.hpp"

namespace mobilab {

// Unit-disk graph at one instant. Neighbour lists are sorted and symmetric.
struct AdjacencySnapshot {
    double time = 0.0;
    std::vector<std::vector<int>> neighbors;

    std::size_t node_count() const { return neighbors.size(); }
    std::size_t edge_count() const;
    bool connected(int j, int k) const;
};

// Edges join nodes at distance <= range (inclusive). Uses a uniform cell grid.
AdjacencySnapshot adjacency_from_positions(std::span<const Vec2> positions, double range,
                                           double time = 0.0);

std::vector<Vec2> positions_at(const Scenario& scenario, double t);

AdjacencySnapshot sample_adjacency(const Scenario& scenario, double t, double range);

// Sample instants 0, dt, 2dt, ... strictly before duration. Each sample
// stands for the cell [t, min(t + dt, duration)).
std::vector<double> sample_times(double duration, double sample_interval);

std::vector<AdjacencySnapshot> sample_snapshots(const Scenario& scenario, double range,
                                                double sample_interval);

// Half-open up-interval [start, end).
struct Interval {
    double start = 0.0;
    double end = 0.0;

    double length() const { return end - start; }
    bool contains(double t) const { return t >= start && t < end; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

// Per unordered node pair, the sorted disjoint intervals the pair was in range.
class ContactTimeline {
 public:
    ContactTimeline(std::size_t node_count, double sample_interval, double duration);

    std::size_t node_count() const { return node_count_; }
    std::size_t pair_count() const { return intervals_.size(); }
    double sample_interval() const { return sample_interval_; }
    double duration() const { return duration_; }

    std::size_t pair_index(int j, int k) const;
    const std::vector<Interval>& intervals(int j, int k) const;
    const std::vector<Interval>& intervals_at(std::size_t pair) const { return intervals_[pair]; }
    void append(int j, int k, Interval interval);

    bool linked_at(int j, int k, double t) const;
    std::size_t interval_count() const;

 private:
    std::size_t node_count_;
    double sample_interval_;
    double duration_;
    std::vector<std::vector<Interval>> intervals_;
};

ContactTimeline timeline_from_snapshots(std::span<const AdjacencySnapshot> snapshots,
                                        std::size_t node_count, double sample_interval,
                                        double duration);

ContactTimeline build_timeline(const Scenario& scenario, double range, double sample_interval);

}  // namespace mobilab
