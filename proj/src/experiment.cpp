#include "mobilab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

#include "mobilab/errors.hpp"
#include "mobilab/models.hpp"

namespace mobilab {

namespace {

constexpr std::uint64_t kFlowStream = 1;
constexpr std::uint64_t kRoutingStream = 2;

std::size_t model_index(MobilityModel m) { return static_cast<std::size_t>(m); }

bool same_speed(double a, double b) { return std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(a)); }

struct Task {
    MobilityModel model;
    std::size_t speed_index;
    std::size_t replicate;
};

RunResult execute(const ExperimentPlan& plan, const Task& task) {
    RunResult r;
    r.model = task.model;
    r.speed_index = task.speed_index;
    r.speed = plan.speed_points[task.speed_index];
    r.replicate = task.replicate;
    r.seed = run_seed(plan.base.seed, task.model, task.speed_index, task.replicate);

    ScenarioConfig cfg = plan.base;
    cfg.model = task.model;
    cfg.max_speed = r.speed;
    cfg.min_speed = std::min(plan.base.min_speed, r.speed);
    cfg.seed = r.seed;

    if (plan.wants_metrics()) {
        Scenario scenario = generate(cfg);
        r.metrics = compute_all(scenario, cfg.radio_range, cfg.sample_interval);
    }
    if (plan.wants_performance()) {
        ScenarioConfig routing_cfg = cfg;
        routing_cfg.duration = plan.traffic.duration;
        Scenario scenario = generate(routing_cfg);
        RandomStream flow_rng(derive_stream_seed(r.seed, kFlowStream));
        std::vector<Flow> flows = build_flows(routing_cfg.node_count, plan.traffic, flow_rng);
        RandomStream sim_rng(derive_stream_seed(r.seed, kRoutingStream));
        r.performance = run_simulation(scenario, flows, plan.sim, sim_rng);
    }
    return r;
}

}  // namespace

void check_plan(const ExperimentPlan& plan) {
    if (plan.seeds < 1) throw ConfigError("seeds must be at least 1");
    if (plan.models.empty()) throw ConfigError("models must not be empty");
    if (plan.speed_points.empty()) throw ConfigError("speed_points must not be empty");
    for (double s : plan.speed_points)
        if (!(s > 0.0)) throw ConfigError("speed_points must be positive");
    if (plan.speed_points.size() >= (1u << 16)) throw ConfigError("too many speed points");
    if (plan.wants_performance()) check_params(plan.sim);
}

std::uint64_t run_seed(std::uint64_t root, MobilityModel model, std::size_t speed_index,
                       std::size_t replicate) {
    std::uint64_t code = (static_cast<std::uint64_t>(model_index(model)) << 48) |
                         (static_cast<std::uint64_t>(speed_index) << 32) |
                         static_cast<std::uint64_t>(replicate);
    return mix64(root + code);
}

std::string_view to_string(Quantity q) {
    switch (q) {
        case Quantity::ND: return "ND";
        case Quantity::NP: return "NP";
        case Quantity::LC: return "LC";
        case Quantity::LD: return "LD";
        case Quantity::RS: return "RS";
        case Quantity::PDR: return "PDR";
        case Quantity::Delay: return "delay";
        case Quantity::NRL: return "NRL";
    }
    return "?";
}

std::optional<Quantity> parse_quantity(std::string_view name) {
    for (Quantity q : {Quantity::ND, Quantity::NP, Quantity::LC, Quantity::LD, Quantity::RS,
                       Quantity::PDR, Quantity::Delay, Quantity::NRL})
        if (to_string(q) == name) return q;
    return std::nullopt;
}

Stat summarize(std::vector<double> values) {
    Stat s;
    s.n = values.size();
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    s.min = values.front();
    s.max = values.back();
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = std::clamp(sum / static_cast<double>(s.n), s.min, s.max);
    if (s.n > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(sq / static_cast<double>(s.n - 1));
    }
    return s;
}

const Stat& AggregateRow::stat(Quantity q) const {
    switch (q) {
        case Quantity::ND: return nd;
        case Quantity::NP: return np;
        case Quantity::LC: return lc;
        case Quantity::LD: return ld;
        case Quantity::RS: return rs;
        case Quantity::PDR: return pdr;
        case Quantity::Delay: return delay;
        case Quantity::NRL: return nrl;
    }
    return nd;
}

std::vector<AggregateRow> aggregate(std::span<const RunResult> runs) {
    std::vector<const RunResult*> ordered;
    for (const RunResult& r : runs) ordered.push_back(&r);
    std::stable_sort(ordered.begin(), ordered.end(), [](const RunResult* a, const RunResult* b) {
        return std::tuple(model_index(a->model), a->speed_index, a->speed) <
               std::tuple(model_index(b->model), b->speed_index, b->speed);
    });
    std::vector<AggregateRow> rows;
    std::vector<std::vector<const RunResult*>> members;
    for (const RunResult* run : ordered) {
        const RunResult& r = *run;
        auto it = std::find_if(rows.begin(), rows.end(), [&](const AggregateRow& row) {
            return row.model == r.model && same_speed(row.speed, r.speed);
        });
        if (it == rows.end()) {
            AggregateRow row;
            row.model = r.model;
            row.speed = r.speed;
            rows.push_back(row);
            members.emplace_back();
            it = rows.end() - 1;
        }
        members[static_cast<std::size_t>(it - rows.begin())].push_back(&r);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        AggregateRow& row = rows[i];
        row.runs = members[i].size();
        std::vector<double> nd, np, lc, lcp, ld, rs, pdr, delay, nrl, sent, delivered, routing;
        for (const RunResult* r : members[i]) {
            if (r->metrics) {
                const MetricReport& m = *r->metrics;
                nd.push_back(m.avg_node_degree);
                np.push_back(m.avg_partitions);
                lc.push_back(static_cast<double>(m.link_changes));
                lcp.push_back(m.link_changes_per_pair);
                ld.push_back(m.avg_link_duration);
                rs.push_back(m.avg_relative_speed);
            }
            if (r->performance) {
                const PerfReport& p = *r->performance;
                pdr.push_back(p.pdr);
                sent.push_back(static_cast<double>(p.sent));
                delivered.push_back(static_cast<double>(p.delivered));
                routing.push_back(static_cast<double>(p.routing_packets));
                if (p.nrl) {
                    delay.push_back(p.avg_delay);
                    nrl.push_back(*p.nrl);
                } else {
                    ++row.nrl_undefined;
                }
            }
        }
        row.nd = summarize(nd);
        row.np = summarize(np);
        row.lc = summarize(lc);
        row.lc_per_pair = summarize(lcp);
        row.ld = summarize(ld);
        row.rs = summarize(rs);
        row.pdr = summarize(pdr);
        row.delay = summarize(delay);
        row.nrl = summarize(nrl);
        row.sent = summarize(sent);
        row.delivered = summarize(delivered);
        row.routing_packets = summarize(routing);
    }
    return rows;
}

PlanResult run_plan(const ExperimentPlan& plan) {
    check_plan(plan);
    std::vector<Task> tasks;
    for (MobilityModel m : plan.models)
        for (std::size_t s = 0; s < plan.speed_points.size(); ++s)
            for (int rep = 0; rep < plan.seeds; ++rep)
                tasks.push_back({m, s, static_cast<std::size_t>(rep)});

    PlanResult result;
    result.runs.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_task = tasks.size();
    std::string error_text;

    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                result.runs[i] = execute(plan, tasks[i]);
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mutex);
                if (i < error_task) {
                    error_task = i;
                    error_text = e.what();
                }
            }
        }
    };
    unsigned threads = plan.parallelism > 0 ? plan.parallelism : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tasks.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (error_task < tasks.size()) {
        const Task& t = tasks[error_task];
        std::ostringstream msg;
        msg << "run failed for model " << to_string(t.model) << ", max speed "
            << plan.speed_points[t.speed_index] << ", replicate " << t.replicate << ": "
            << error_text;
        throw ConfigError(msg.str());
    }
    result.rows = aggregate(result.runs);
    return result;
}

SeparationEntry separation(std::span<const AggregateRow> rows, Quantity metric, double speed) {
    std::optional<double> mean[4];
    for (const AggregateRow& row : rows)
        if (same_speed(row.speed, speed)) mean[model_index(row.model)] = row.stat(metric).mean;
    for (MobilityModel m : kAllModels)
        if (!mean[model_index(m)])
            throw UsageError("separation needs model " + std::string(to_string(m)) + " at speed " +
                             std::to_string(speed));

    const double rwp = *mean[0], gm = *mean[1], rpgm = *mean[2], ncmm = *mean[3];
    SeparationEntry e;
    e.metric = metric;
    e.speed = speed;
    e.entity_min = std::min(rwp, gm);
    e.entity_max = std::max(rwp, gm);
    e.group_min = std::min(rpgm, ncmm);
    e.group_max = std::max(rpgm, ncmm);
    const double group_above = e.group_min - e.entity_max;
    const double entity_above = e.entity_min - e.group_max;
    e.margin = std::max(group_above, entity_above);
    e.separated = e.margin > 0.0;
    e.group_higher = e.separated ? group_above > 0.0
                                 : (e.group_min + e.group_max) > (e.entity_min + e.entity_max);
    const double span = std::max(e.entity_max, e.group_max) - std::min(e.entity_min, e.group_min);
    e.relative_margin = span > 0.0 ? e.margin / span : 0.0;
    return e;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

RankCorrelation spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw UsageError("correlation inputs differ in length");
    if (x.size() < 3) throw UsageError("correlation needs at least 3 points");
    RankCorrelation out;
    out.points = x.size();
    std::vector<double> rx = average_ranks(x);
    std::vector<double> ry = average_ranks(y);
    const double mean = (static_cast<double>(x.size()) + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mean) * (ry[i] - mean);
        sxx += (rx[i] - mean) * (rx[i] - mean);
        syy += (ry[i] - mean) * (ry[i] - mean);
    }
    if (sxx == 0.0 || syy == 0.0) {
        out.degenerate = true;
        return out;
    }
    out.coefficient = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    return out;
}

CorrelationEntry correlate(std::span<const AggregateRow> rows, Quantity mobility,
                           Quantity performance, std::optional<double> speed) {
    std::vector<double> x, y;
    for (const AggregateRow& row : rows) {
        if (speed && !same_speed(row.speed, *speed)) continue;
        x.push_back(row.stat(mobility).mean);
        y.push_back(row.stat(performance).mean);
    }
    CorrelationEntry e;
    e.mobility = mobility;
    e.performance = performance;
    e.rho = spearman(x, y);
    e.sign = e.rho.coefficient > 0.0 ? 1 : (e.rho.coefficient < 0.0 ? -1 : 0);
    return e;
}

}  // namespace mobilab
