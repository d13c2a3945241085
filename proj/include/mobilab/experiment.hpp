#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mobilab/metrics.hpp"
#include "mobilab/routesim.hpp"
#include "mobilab/scenario.hpp"

namespace mobilab {

enum class Outputs { Metrics, Performance, Both };

struct ExperimentPlan {
    std::vector<MobilityModel> models{std::begin(kAllModels), std::end(kAllModels)};
    std::vector<double> speed_points{5.0, 10.0, 15.0, 20.0};
    int seeds = 25;
    Outputs outputs = Outputs::Metrics;
    // 0 selects std::thread::hardware_concurrency().
    unsigned parallelism = 0;
    ScenarioConfig base;  // base.seed is the plan's root seed
    TrafficConfig traffic;
    SimParams sim;

    bool wants_metrics() const { return outputs != Outputs::Performance; }
    bool wants_performance() const { return outputs != Outputs::Metrics; }
};

// Throws ConfigError for an empty or non-positive sweep.
void check_plan(const ExperimentPlan& plan);

// Scenario seed of one run. Injective in (model, speed_index, replicate) for
// a fixed root seed as long as speed_index < 2^16 and replicate < 2^32.
std::uint64_t run_seed(std::uint64_t root, MobilityModel model, std::size_t speed_index,
                       std::size_t replicate);

enum class Quantity { ND, NP, LC, LD, RS, PDR, Delay, NRL };

inline constexpr Quantity kMobilityMetrics[] = {Quantity::ND, Quantity::NP, Quantity::LC,
                                                Quantity::LD, Quantity::RS};
inline constexpr Quantity kPerformanceMetrics[] = {Quantity::PDR, Quantity::Delay, Quantity::NRL};

std::string_view to_string(Quantity q);
std::optional<Quantity> parse_quantity(std::string_view name);

struct RunResult {
    MobilityModel model = MobilityModel::RWP;
    std::size_t speed_index = 0;
    double speed = 0.0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    std::optional<MetricReport> metrics;
    std::optional<PerfReport> performance;
};

// Mean and sample standard deviation across seeds.
struct Stat {
    double mean = 0.0;
    double sd = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t n = 0;
};

// Order-independent: values are sorted before summation.
Stat summarize(std::vector<double> values);

struct AggregateRow {
    MobilityModel model = MobilityModel::RWP;
    double speed = 0.0;
    std::size_t runs = 0;
    Stat nd, np, lc, lc_per_pair, ld, rs;
    Stat pdr, delay, nrl, sent, delivered, routing_packets;
    std::size_t nrl_undefined = 0;  // runs that delivered nothing

    const Stat& stat(Quantity q) const;
};

struct PlanResult {
    std::vector<AggregateRow> rows;  // model-major, then speed point
    std::vector<RunResult> runs;
};

// Runs every (model, speed, replicate) triple; runs execute concurrently
// up to plan.parallelism. Errors are rethrown naming the failing triple.
PlanResult run_plan(const ExperimentPlan& plan);

// Rows sharing the same model and speed are aggregated together. Output rows
// are ordered by model, then speed point, whatever the order of `runs`.
std::vector<AggregateRow> aggregate(std::span<const RunResult> runs);

struct SeparationEntry {
    Quantity metric = Quantity::ND;
    double speed = 0.0;
    double entity_min = 0.0, entity_max = 0.0;  // RWP, GM
    double group_min = 0.0, group_max = 0.0;    // RPGM, NCMM
    bool separated = false;
    bool group_higher = false;
    // Gap between the class intervals; negative when they overlap.
    double margin = 0.0;
    // margin divided by the span of all four means.
    double relative_margin = 0.0;
};

// Uses the rows at `speed`. Throws UsageError when any model is missing.
SeparationEntry separation(std::span<const AggregateRow> rows, Quantity metric, double speed);

struct RankCorrelation {
    double coefficient = 0.0;
    bool degenerate = false;  // a variable had all-tied ranks
    std::size_t points = 0;
};

// Spearman rho with average ranks for ties. Throws UsageError for fewer than
// three points or mismatched lengths.
RankCorrelation spearman(std::span<const double> x, std::span<const double> y);

struct CorrelationEntry {
    Quantity mobility = Quantity::LD;
    Quantity performance = Quantity::NRL;
    RankCorrelation rho;
    int sign = 0;
};

// Correlates aggregate means over the rows (optionally one speed only).
CorrelationEntry correlate(std::span<const AggregateRow> rows, Quantity mobility,
                           Quantity performance, std::optional<double> speed = std::nullopt);

}  // namespace mobilab
