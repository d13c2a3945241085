#include "mobilab/contact.hpp"

#include <algorithm>
#include <cmath>

#include "mobilab/errors.hpp"

namespace mobilab {

std::size_t AdjacencySnapshot::edge_count() const {
    std::size_t degree_sum = 0;
    for (const auto& n : neighbors) degree_sum += n.size();
    return degree_sum / 2;
}

bool AdjacencySnapshot::connected(int j, int k) const {
    const auto& n = neighbors.at(j);
    return std::binary_search(n.begin(), n.end(), k);
}

AdjacencySnapshot adjacency_from_positions(std::span<const Vec2> positions, double range,
                                           double time) {
    if (!(range > 0.0)) throw UsageError("radio range must be positive");
    AdjacencySnapshot snap;
    snap.time = time;
    const std::size_t n = positions.size();
    snap.neighbors.resize(n);
    if (n < 2) return snap;

    double min_x = positions[0].x, max_x = min_x, min_y = positions[0].y, max_y = min_y;
    for (const Vec2& p : positions) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    // Cells are at least `range` wide; widen them when the grid would be much
    // larger than the node count.
    double cell = range;
    const double cell_budget = 4.0 * static_cast<double>(n) + 16.0;
    while (((max_x - min_x) / cell + 1.0) * ((max_y - min_y) / cell + 1.0) > cell_budget)
        cell *= 2.0;
    const auto cols = static_cast<std::size_t>((max_x - min_x) / cell) + 1;
    const auto rows = static_cast<std::size_t>((max_y - min_y) / cell) + 1;

    std::vector<std::size_t> cell_of(n);
    std::vector<std::size_t> start(cols * rows + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto cx = static_cast<std::size_t>((positions[i].x - min_x) / cell);
        auto cy = static_cast<std::size_t>((positions[i].y - min_y) / cell);
        cell_of[i] = std::min(cy, rows - 1) * cols + std::min(cx, cols - 1);
        ++start[cell_of[i] + 1];
    }
    for (std::size_t c = 0; c < cols * rows; ++c) start[c + 1] += start[c];
    std::vector<int> members(n);
    {
        std::vector<std::size_t> fill(start.begin(), start.end() - 1);
        for (std::size_t i = 0; i < n; ++i) members[fill[cell_of[i]]++] = static_cast<int>(i);
    }

    const double r2 = range * range;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t cx = cell_of[i] % cols;
        const std::size_t cy = cell_of[i] / cols;
        for (std::size_t y = cy > 0 ? cy - 1 : 0; y <= std::min(cy + 1, rows - 1); ++y) {
            for (std::size_t x = cx > 0 ? cx - 1 : 0; x <= std::min(cx + 1, cols - 1); ++x) {
                const std::size_t c = y * cols + x;
                for (std::size_t m = start[c]; m < start[c + 1]; ++m) {
                    const int j = members[m];
                    if (static_cast<std::size_t>(j) == i) continue;
                    if (squared_norm(positions[i] - positions[j]) <= r2)
                        snap.neighbors[i].push_back(j);
                }
            }
        }
        std::sort(snap.neighbors[i].begin(), snap.neighbors[i].end());
    }
    return snap;
}

std::vector<Vec2> positions_at(const Scenario& scenario, double t) {
    std::vector<Vec2> out(scenario.node_count());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = position_at(scenario.traces[i], t);
    return out;
}

AdjacencySnapshot sample_adjacency(const Scenario& scenario, double t, double range) {
    std::vector<Vec2> pos = positions_at(scenario, t);
    return adjacency_from_positions(pos, range, t);
}

std::vector<double> sample_times(double duration, double sample_interval) {
    if (!(sample_interval > 0.0)) throw UsageError("sample_interval must be positive");
    std::vector<double> times;
    for (long k = 0;; ++k) {
        double t = static_cast<double>(k) * sample_interval;
        if (t >= duration - 1e-9 * sample_interval) break;
        times.push_back(t);
    }
    if (times.empty()) times.push_back(0.0);
    return times;
}

std::vector<AdjacencySnapshot> sample_snapshots(const Scenario& scenario, double range,
                                                double sample_interval) {
    std::vector<AdjacencySnapshot> out;
    for (double t : sample_times(scenario.duration, sample_interval))
        out.push_back(sample_adjacency(scenario, t, range));
    return out;
}

ContactTimeline::ContactTimeline(std::size_t node_count, double sample_interval, double duration)
    : node_count_(node_count),
      sample_interval_(sample_interval),
      duration_(duration),
      intervals_(node_count * (node_count > 0 ? node_count - 1 : 0) / 2) {}

std::size_t ContactTimeline::pair_index(int j, int k) const {
    if (j == k || j < 0 || k < 0 || static_cast<std::size_t>(std::max(j, k)) >= node_count_)
        throw UsageError("invalid node pair");
    auto a = static_cast<std::size_t>(std::min(j, k));
    auto b = static_cast<std::size_t>(std::max(j, k));
    // Row-major upper triangle without the diagonal.
    return a * node_count_ - a * (a + 1) / 2 + (b - a - 1);
}

const std::vector<Interval>& ContactTimeline::intervals(int j, int k) const {
    return intervals_[pair_index(j, k)];
}

void ContactTimeline::append(int j, int k, Interval interval) {
    intervals_[pair_index(j, k)].push_back(interval);
}

bool ContactTimeline::linked_at(int j, int k, double t) const {
    const auto& list = intervals(j, k);
    auto it = std::upper_bound(list.begin(), list.end(), t,
                               [](double v, const Interval& i) { return v < i.start; });
    return it != list.begin() && (it - 1)->contains(t);
}

std::size_t ContactTimeline::interval_count() const {
    std::size_t total = 0;
    for (const auto& list : intervals_) total += list.size();
    return total;
}

ContactTimeline timeline_from_snapshots(std::span<const AdjacencySnapshot> snapshots,
                                        std::size_t node_count, double sample_interval,
                                        double duration) {
    ContactTimeline timeline(node_count, sample_interval, duration);
    const std::size_t pairs = timeline.pair_count();
    constexpr long kDown = -1;
    std::vector<long> opened(pairs, kDown);  // sample index where the run began
    std::vector<long> last_up(pairs, kDown);
    std::vector<std::size_t> active;          // pairs with an open run

    auto close = [&](std::size_t pair, long last_sample) {
        double end = std::min(snapshots[last_sample].time + sample_interval, duration);
        return Interval{snapshots[opened[pair]].time, end};
    };

    std::vector<std::pair<int, int>> pair_nodes(pairs);
    for (std::size_t a = 0; a < node_count; ++a)
        for (std::size_t b = a + 1; b < node_count; ++b)
            pair_nodes[timeline.pair_index(static_cast<int>(a), static_cast<int>(b))] = {
                static_cast<int>(a), static_cast<int>(b)};

    for (std::size_t s = 0; s < snapshots.size(); ++s) {
        const auto& snap = snapshots[s];
        if (snap.node_count() != node_count) throw UsageError("snapshot node count mismatch");
        for (std::size_t j = 0; j < node_count; ++j) {
            for (int k : snap.neighbors[j]) {
                if (static_cast<std::size_t>(k) <= j) continue;
                std::size_t p = timeline.pair_index(static_cast<int>(j), k);
                if (opened[p] == kDown) {
                    opened[p] = static_cast<long>(s);
                    active.push_back(p);
                }
                last_up[p] = static_cast<long>(s);
            }
        }
        std::size_t keep = 0;
        for (std::size_t p : active) {
            if (last_up[p] == static_cast<long>(s)) {
                active[keep++] = p;
                continue;
            }
            auto [j, k] = pair_nodes[p];
            timeline.append(j, k, close(p, last_up[p]));
            opened[p] = kDown;
        }
        active.resize(keep);
    }
    std::sort(active.begin(), active.end());
    for (std::size_t p : active) {
        auto [j, k] = pair_nodes[p];
        timeline.append(j, k, close(p, last_up[p]));
    }
    return timeline;
}

ContactTimeline build_timeline(const Scenario& scenario, double range, double sample_interval) {
    auto snaps = sample_snapshots(scenario, range, sample_interval);
    return timeline_from_snapshots(snaps, scenario.node_count(), sample_interval,
                                   scenario.duration);
}

}  // namespace mobilab
