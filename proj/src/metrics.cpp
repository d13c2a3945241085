#include "mobilab/metrics.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "mobilab/errors.hpp"

namespace mobilab {

namespace {

class DisjointSet {
 public:
    explicit DisjointSet(std::size_t n) : parent_(n), rank_(n, 0), sets_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];  // path halving
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        --sets_;
    }

    std::size_t sets() const { return sets_; }

 private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned char> rank_;
    std::size_t sets_;
};

void require_samples(std::span<const AdjacencySnapshot> snapshots) {
    if (snapshots.empty()) throw UsageError("at least one sample is required");
}

}  // namespace

std::size_t count_components(const AdjacencySnapshot& snapshot) {
    DisjointSet ds(snapshot.node_count());
    for (std::size_t j = 0; j < snapshot.node_count(); ++j)
        for (int k : snapshot.neighbors[j])
            if (static_cast<std::size_t>(k) > j) ds.unite(j, static_cast<std::size_t>(k));
    return ds.sets();
}

double node_degree(std::span<const AdjacencySnapshot> snapshots) {
    require_samples(snapshots);
    double sum = 0.0;
    std::size_t observations = 0;
    for (const auto& snap : snapshots) {
        sum += 2.0 * static_cast<double>(snap.edge_count());
        observations += snap.node_count();
    }
    return observations == 0 ? 0.0 : sum / static_cast<double>(observations);
}

double network_partitions(std::span<const AdjacencySnapshot> snapshots) {
    require_samples(snapshots);
    double sum = 0.0;
    for (const auto& snap : snapshots) sum += static_cast<double>(count_components(snap));
    return sum / static_cast<double>(snapshots.size());
}

LinkChangeCount link_changes(const ContactTimeline& timeline) {
    LinkChangeCount out;
    const double eps = 1e-9 * timeline.sample_interval();
    for (std::size_t p = 0; p < timeline.pair_count(); ++p) {
        for (const Interval& iv : timeline.intervals_at(p)) {
            out.total += 2;
            if (iv.start <= eps) --out.total;
            if (iv.end >= timeline.duration() - eps) --out.total;
        }
    }
    if (timeline.pair_count() > 0)
        out.per_pair = static_cast<double>(out.total) / static_cast<double>(timeline.pair_count());
    return out;
}

double link_duration(const ContactTimeline& timeline) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t p = 0; p < timeline.pair_count(); ++p) {
        for (const Interval& iv : timeline.intervals_at(p)) {
            sum += iv.length();
            ++count;
        }
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double relative_speed(const Scenario& scenario, const ContactTimeline& timeline,
                      double sample_interval) {
    const std::size_t n = scenario.node_count();
    if (timeline.node_count() != n) throw UsageError("timeline does not match scenario");
    const std::vector<double> times = sample_times(scenario.duration, sample_interval);

    // Velocities of every node at every sample, computed once.
    std::vector<Vec2> vel(times.size() * n);
    for (std::size_t s = 0; s < times.size(); ++s)
        for (std::size_t i = 0; i < n; ++i) vel[s * n + i] = velocity_at(scenario.traces[i], times[s]);

    double sum = 0.0;
    std::size_t observations = 0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            for (const Interval& iv : timeline.intervals(static_cast<int>(a), static_cast<int>(b))) {
                auto first = static_cast<std::size_t>(std::llround(iv.start / sample_interval));
                for (std::size_t s = first; s < times.size() && times[s] < iv.end; ++s) {
                    sum += norm(vel[s * n + a] - vel[s * n + b]);
                    ++observations;
                }
            }
        }
    }
    return observations == 0 ? 0.0 : sum / static_cast<double>(observations);
}

MetricReport compute_all(const Scenario& scenario, double range, double sample_interval) {
    ValidationResult check = validate(scenario);
    if (!check.ok()) {
        std::string msg = "invalid scenario: " + check.violations.front().message;
        if (check.violations.size() > 1)
            msg += " (+" + std::to_string(check.violations.size() - 1) + " more)";
        throw UsageError(msg);
    }
    auto snaps = sample_snapshots(scenario, range, sample_interval);
    ContactTimeline timeline =
        timeline_from_snapshots(snaps, scenario.node_count(), sample_interval, scenario.duration);

    MetricReport r;
    r.avg_node_degree = node_degree(snaps);
    r.avg_partitions = network_partitions(snaps);
    LinkChangeCount lc = link_changes(timeline);
    r.link_changes = lc.total;
    r.link_changes_per_pair = lc.per_pair;
    r.avg_link_duration = link_duration(timeline);
    r.avg_relative_speed = relative_speed(scenario, timeline, sample_interval);
    r.sample_interval = sample_interval;
    r.radio_range = range;
    r.node_count = scenario.node_count();
    r.samples = snaps.size();
    return r;
}

}  // namespace mobilab
