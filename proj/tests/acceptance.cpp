// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mobilab/cli.hpp"
#include "mobilab/config.hpp"
#include "mobilab/contact.hpp"
#include "mobilab/experiment.hpp"
#include "mobilab/metrics.hpp"
#include "mobilab/models.hpp"
#include "mobilab/random.hpp"
#include "mobilab/routesim.hpp"
#include "mobilab/trace_io.hpp"
#include "oracles.hpp"

using namespace mobilab;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

// Shared 25-seed study at 20 m/s, computed once.
struct Study {
    PlanResult result;
    double metric_seconds = 0.0;
    double routing_seconds = 0.0;
};

const Study& study() {
    static const Study s = [] {
        Study st;
        ExperimentPlan plan;
        plan.speed_points = {20.0};
        plan.seeds = 25;

        plan.outputs = Outputs::Metrics;
        auto t0 = Clock::now();
        PlanResult metrics = run_plan(plan);
        st.metric_seconds = seconds_since(t0);

        plan.outputs = Outputs::Performance;
        t0 = Clock::now();
        PlanResult routing = run_plan(plan);
        st.routing_seconds = seconds_since(t0);

        for (std::size_t i = 0; i < metrics.runs.size(); ++i)
            metrics.runs[i].performance = routing.runs[i].performance;
        st.result.runs = std::move(metrics.runs);
        st.result.rows = aggregate(st.result.runs);

        std::printf("  study: 100 metric runs in %.1f s, 100 routing runs in %.1f s\n",
                    st.metric_seconds, st.routing_seconds);
        std::printf("  %-5s %8s %8s %10s %8s %8s %8s %9s %8s\n", "model", "ND", "NP", "LC", "LD", "RS",
                    "PDR", "delay", "NRL");
        for (const AggregateRow& r : st.result.rows)
            std::printf("  %-5s %8.3f %8.3f %10.1f %8.3f %8.3f %8.2f %9.4f %8.3f\n",
                        std::string(to_string(r.model)).c_str(), r.nd.mean, r.np.mean, r.lc.mean,
                        r.ld.mean, r.rs.mean, r.pdr.mean, r.delay.mean, r.nrl.mean);
        return st;
    }();
    return s;
}

const AggregateRow& row(MobilityModel m) {
    for (const AggregateRow& r : study().result.rows)
        if (r.model == m) return r;
    throw std::runtime_error("missing model row");
}

Outcome oracle_equivalence() {
    auto t0 = Clock::now();
    RandomStream rng(20240601);
    int mismatches = 0;
    for (int round = 0; round < 100; ++round) {
        int n = 15 + static_cast<int>(rng.index(6));
        std::vector<Vec2> pts;
        for (int i = 0; i < n; ++i) pts.push_back(rng.in_area({1000.0, 1000.0}));
        Scenario s = oracle::static_scenario(pts, 1000.0, 1000.0, 1.0, 75.0);
        AdjacencySnapshot snap = sample_adjacency(s, 0.0, 75.0);
        auto brute = oracle::adjacency(pts, 75.0);
        if (snap.neighbors != brute) ++mismatches;
        if (network_partitions(std::span(&snap, 1)) != static_cast<double>(oracle::components(brute)))
            ++mismatches;
    }
    double elapsed = seconds_since(t0);
    return {mismatches == 0 && elapsed < 5.0,
            fmt("100 snapshots, %d mismatches, %.3f s (budget 5 s)", mismatches, elapsed)};
}

Outcome reference_layout() {
    auto pts = oracle::reference_layout();
    Scenario s = oracle::static_scenario(pts, 1000.0, 1000.0, 900.0, 75.0);
    AdjacencySnapshot snap = sample_adjacency(s, 0.0, 75.0);
    std::size_t degree = snap.neighbors[oracle::kReferenceHub].size();
    double np = compute_all(s, 75.0, 1.0).avg_partitions;
    return {degree == 3 && np == 4.0, fmt("hub degree %zu (expected 3), partitions %g (expected 4)", degree, np)};
}

Outcome gauss_markov_algebra() {
    RandomStream rng(31337);
    double worst = 0.0;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
    for (int i = 0; i < 1000; ++i) {
        GmState s;
        s.alpha = rng.uniform(0.0, 1.0);
        s.speed = rng.uniform(0.0, 40.0);
        s.mean_speed = rng.uniform(0.0, 40.0);
        s.direction = rng.uniform(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
        s.mean_direction = rng.uniform(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
        double gv = rng.standard_normal() * 3.0;
        double gd = rng.standard_normal();
        GmState next = gm_update(s, gv, gd);
        double v = std::max(0.0, oracle::gm_speed(s.alpha, s.speed, s.mean_speed, gv));
        worst = std::max(worst, rel(next.speed, v));
        worst = std::max(worst, rel(next.direction, oracle::gm_direction(s.alpha, s.direction, s.mean_direction, gd)));

        Vec2 from{rng.uniform(0.0, 1000.0), rng.uniform(0.0, 1000.0)};
        double dt = rng.uniform(0.1, 3.0);
        Vec2 p = gm_advance(from, next, dt);
        Vec2 q = oracle::gm_position(from, next.speed, next.direction, dt);
        worst = std::max({worst, rel(p.x, q.x), rel(p.y, q.y)});
    }
    GmState s{13.0, 0.7, 9.0, 2.1, 1.0};
    GmState memory = gm_update(s, 1.9, -0.4);
    s.alpha = 0.0;
    GmState memoryless = gm_update(s, 0.0, 0.0);
    bool limits = memory.speed == 13.0 && memory.direction == 0.7 && memoryless.speed == 9.0 &&
                  memoryless.direction == 2.1;
    return {worst <= 1e-12 && limits,
            fmt("1000 inputs, worst relative error %.2e, limit cases %s", worst, limits ? "exact" : "wrong")};
}

Outcome ld_separation() {
    const auto& st = study();
    SeparationEntry e = separation(st.result.rows, Quantity::LD, 20.0);
    bool budget = st.metric_seconds < 180.0;
    return {e.separated && e.group_higher && budget,
            fmt("entity [%.3f, %.3f] s, group [%.3f, %.3f] s, margin %.3f s; metric runs %.1f s (budget 180 s)",
                e.entity_min, e.entity_max, e.group_min, e.group_max, e.margin, st.metric_seconds)};
}

Outcome nd_separation() {
    double group = std::min(row(MobilityModel::RPGM).nd.mean, row(MobilityModel::NCMM).nd.mean);
    double entity = std::max(row(MobilityModel::RWP).nd.mean, row(MobilityModel::GM).nd.mean);
    return {group > entity, fmt("min group ND %.3f vs max entity ND %.3f", group, entity)};
}

Outcome np_ordering() {
    double rpgm = row(MobilityModel::RPGM).np.mean;
    double rwp = row(MobilityModel::RWP).np.mean;
    return {rpgm < rwp, fmt("NP RPGM %.3f vs RWP %.3f", rpgm, rwp)};
}

Outcome rs_ordering() {
    double rpgm = row(MobilityModel::RPGM).rs.mean;
    double others = std::min({row(MobilityModel::RWP).rs.mean, row(MobilityModel::GM).rs.mean,
                              row(MobilityModel::NCMM).rs.mean});
    return {rpgm < others, fmt("RS RPGM %.3f m/s vs lowest other %.3f m/s", rpgm, others)};
}

Outcome lc_non_separation() {
    const auto& rows = study().result.rows;
    std::vector<SeparationEntry> report;
    for (Quantity q : kMobilityMetrics) report.push_back(separation(rows, q, 20.0));
    const SeparationEntry* lc = nullptr;
    double smallest_other = INFINITY;
    std::string margins;
    for (const SeparationEntry& e : report) {
        margins += fmt("%s %.3f ", std::string(to_string(e.metric)).c_str(), e.relative_margin);
        if (e.metric == Quantity::LC) lc = &e;
        else smallest_other = std::min(smallest_other, e.relative_margin);
    }
    bool pass = lc != nullptr && (lc->margin < 0.0 || lc->relative_margin < smallest_other);
    return {pass, fmt("LC separated=%s; relative margins: %s", lc != nullptr && lc->separated ? "yes" : "no",
                      margins.c_str())};
}

Outcome ld_nrl_sign() {
    const auto& st = study();
    CorrelationEntry c = correlate(st.result.rows, Quantity::LD, Quantity::NRL, 20.0);
    bool budget = st.routing_seconds < 600.0;
    return {c.rho.coefficient < 0.0 && budget,
            fmt("Spearman(LD, NRL) = %.3f over %zu models; routing runs %.1f s (budget 600 s)",
                c.rho.coefficient, c.rho.points, st.routing_seconds)};
}

Outcome routing_closed_forms() {
    const SimParams params;
    const double hop = 512.0 * 8.0 / params.data_rate + params.per_hop_processing;
    auto static_line = [](std::vector<double> xs) {
        std::vector<Vec2> pts;
        for (double x : xs) pts.push_back({x, 500.0});
        return oracle::static_scenario(pts, 1000.0, 1000.0, 30.0, 75.0);
    };
    auto one_flow = [](int src, int dst) {
        Flow f;
        f.source = src;
        f.destination = dst;
        f.start = 1.0;
        f.stop = 30.0;
        return std::vector<Flow>{f};
    };

    RandomStream r1(1);
    PerfReport pair = run_simulation(static_line({400.0, 600.0}), one_flow(0, 1), params, r1);
    bool pair_ok = pair.pdr == 100.0 && std::abs(pair.avg_delay - hop) <= 1e-9;

    RandomStream r2(1);
    SimLog log;
    PerfReport chain = run_simulation(static_line({300.0, 500.0, 700.0}), one_flow(0, 2), params, r2, &log);
    double worst = 0.0;
    std::size_t on_route = 0;
    for (const Delivery& d : log.deliveries) {
        if (!log.first_route[0] || d.created < *log.first_route[0]) continue;
        worst = std::max(worst, std::abs(d.delay() - 2.0 * hop));
        ++on_route;
    }
    bool chain_ok = chain.pdr == 100.0 && on_route + 1 == chain.delivered && worst <= 1e-9;

    RandomStream r3(1);
    PerfReport apart = run_simulation(static_line({100.0, 900.0}), one_flow(0, 1), params, r3);
    bool apart_ok = apart.pdr == 0.0 && apart.delivered == 0;

    return {pair_ok && chain_ok && apart_ok,
            fmt("pair PDR %g delay err %.1e; chain %zu/%zu packets on the route, worst err %.1e; "
                "partitioned PDR %g",
                pair.pdr, std::abs(pair.avg_delay - hop), on_route, chain.delivered, worst, apart.pdr)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Outcome determinism_and_round_trips() {
    fs::path dir = fs::temp_directory_path() / "mobilab_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "exp.cfg");
        cfg << "[scenario]\nnode_count = 40\nduration = 120\n"
               "[routing]\nsimulation_time = 60\nmax_connections = 6\n"
               "[experiment]\nspeed_points = 10, 20\nseeds = 3\noutputs = both\n";
    }
    bool identical = true;
    for (const char* sub : {"a", "b"}) {
        std::string cfg = (dir / "exp.cfg").string();
        std::string out = (dir / sub).string();
        const char* argv[] = {"mobilab", "experiment", "--config", cfg.c_str(), "--out", out.c_str()};
        std::ostringstream o, e;
        if (run_cli(6, argv, o, e) != kExitOk) identical = false;
    }
    for (const char* name : {"aggregate.csv", "runs.csv", "separation.csv", "correlation.csv"}) {
        std::string a = slurp(dir / "a" / name);
        identical = identical && !a.empty() && a == slurp(dir / "b" / name);
    }

    double ns2_worst = 0.0, bm_worst = 0.0;
    bool idempotent = true;
    for (MobilityModel m : kAllModels) {
        ScenarioConfig cfg;
        cfg.model = m;
        cfg.seed = 404;
        Scenario s = generate(cfg);
        Scenario ns2 = import_ns2_movements(export_ns2_movements(s), cfg.duration, cfg.area());
        for (std::size_t i = 0; i < s.node_count(); ++i)
            for (double t = 0.0; t <= cfg.duration; t += 1.0)
                ns2_worst = std::max(ns2_worst, distance(position_at(s.traces[i], t), position_at(ns2.traces[i], t)));
        std::string text = export_bonnmotion(s);
        Scenario bm = import_bonnmotion(text, cfg.duration, cfg.area());
        for (std::size_t i = 0; i < s.node_count(); ++i) {
            const auto& a = s.traces[i].waypoints;
            const auto& b = bm.traces[i].waypoints;
            if (a.size() != b.size()) {
                bm_worst = INFINITY;
                continue;
            }
            for (std::size_t k = 0; k < a.size(); ++k)
                bm_worst = std::max({bm_worst, std::abs(a[k].time - b[k].time),
                                     std::abs(a[k].position.x - b[k].position.x),
                                     std::abs(a[k].position.y - b[k].position.y)});
        }
        idempotent = idempotent && export_bonnmotion(bm) == text;
    }
    bool pass = identical && ns2_worst <= 1e-4 && bm_worst <= 1e-6 && idempotent;
    return {pass, fmt("experiment CSVs %s; ns-2 worst %.2e m (<= 1e-4); BonnMotion worst %.2e (<= 1e-6), "
                      "re-export %s",
                      identical ? "identical" : "differ", ns2_worst, bm_worst,
                      idempotent ? "idempotent" : "changed")};
}

Outcome conservation() {
    std::size_t checked = 0, broken = 0;
    for (const RunResult& r : study().result.runs) {
        if (!r.performance) {
            ++broken;
            continue;
        }
        ++checked;
        const PerfReport& p = *r.performance;
        if (p.sent != p.delivered + p.drops.total()) ++broken;
    }
    return {broken == 0 && checked == 100, fmt("%zu routing runs checked, %zu violations", checked, broken)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria = {
        {1, "contact and partition oracles", oracle_equivalence},
        {2, "reference layout degree and partitions", reference_layout},
        {3, "Gauss-Markov update and advance algebra", gauss_markov_algebra},
        {4, "LD separates group from entity models", ld_separation},
        {5, "ND separates group from entity models", nd_separation},
        {6, "RPGM has fewer partitions than RWP", np_ordering},
        {7, "RPGM has the lowest relative speed", rs_ordering},
        {8, "LC does not separate the classes", lc_non_separation},
        {9, "LD and NRL are negatively rank-correlated", ld_nrl_sign},
        {10, "routing closed forms", routing_closed_forms},
        {11, "determinism and trace round trips", determinism_and_round_trips},
        {12, "packet conservation on every routing run", conservation},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("criterion %2d %s: %s (%.2f s) %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                    seconds_since(t0), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
    return failed == 0 ? 0 : 1;
}
