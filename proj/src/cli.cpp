#include "mobilab/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mobilab/config.hpp"
#include "mobilab/csv.hpp"
#include "mobilab/errors.hpp"
#include "mobilab/experiment.hpp"
#include "mobilab/metrics.hpp"
#include "mobilab/models.hpp"
#include "mobilab/routesim.hpp"
#include "mobilab/trace_io.hpp"

namespace mobilab {

namespace {

constexpr const char* kOutDirEnv = "MOBILAB_OUT_DIR";

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "bonnmotion";
    std::string trace_path;
};

LabConfig load(const Options& o) {
    LabConfig c = o.config_path.empty() ? LabConfig{} : load_config(o.config_path);
    if (o.seed) c.scenario.seed = *o.seed;
    return c;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << text;
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
    if (o.out.empty() || o.out == "-") {
        out << text;
    } else {
        write_file(o.out, text);
    }
}

Scenario read_trace(const Options& o, double duration, const Area& area, double radio_range) {
    std::string text = read_file(o.trace_path);
    Scenario s;
    try {
        s = o.format == "ns2" ? import_ns2_movements(text, duration, area)
                              : import_bonnmotion(text, duration, area);
    } catch (const ParseError& e) {
        throw ParseError(o.trace_path + ": " + e.what(), e.line(), e.column());
    }
    s.radio_range = radio_range;
    return s;
}

int cmd_generate(const Options& o, std::ostream& out) {
    LabConfig c = load(o);
    Scenario s = generate(c.scenario);
    emit(o, out, o.format == "ns2" ? export_ns2_movements(s) : export_bonnmotion(s));
    return kExitOk;
}

int cmd_metrics(const Options& o, std::ostream& out) {
    LabConfig c = load(o);
    Scenario s = o.trace_path.empty()
                     ? generate(c.scenario)
                     : read_trace(o, c.scenario.duration, c.scenario.area(), c.scenario.radio_range);
    MetricReport r = compute_all(s, c.scenario.radio_range, c.scenario.sample_interval);
    emit(o, out, metrics_csv(std::span(&r, 1)));
    return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
    LabConfig c = load(o);
    ScenarioConfig sc = c.scenario;
    sc.duration = c.traffic.duration;
    Scenario s = o.trace_path.empty() ? generate(sc)
                                      : read_trace(o, sc.duration, sc.area(), sc.radio_range);
    RandomStream flow_rng(derive_stream_seed(sc.seed, 1));
    auto flows = build_flows(static_cast<int>(s.node_count()), c.traffic, flow_rng);
    RandomStream sim_rng(derive_stream_seed(sc.seed, 2));
    PerfReport r = run_simulation(s, flows, c.sim, sim_rng);
    emit(o, out, perf_csv(std::span(&r, 1)));
    return kExitOk;
}

int cmd_experiment(const Options& o, std::ostream& out) {
    LabConfig c = load(o);
    ExperimentPlan plan = c.plan();
    PlanResult result = run_plan(plan);

    std::vector<SeparationEntry> separations;
    if (plan.wants_metrics()) {
        for (double speed : plan.speed_points) {
            bool complete = true;
            for (MobilityModel m : kAllModels)
                complete = complete && std::find(plan.models.begin(), plan.models.end(), m) !=
                                           plan.models.end();
            if (!complete) break;
            for (Quantity q : kMobilityMetrics) separations.push_back(separation(result.rows, q, speed));
        }
    }
    std::vector<CorrelationEntry> correlations;
    if (plan.outputs == Outputs::Both && result.rows.size() >= 3) {
        for (Quantity m : kMobilityMetrics)
            for (Quantity p : kPerformanceMetrics) correlations.push_back(correlate(result.rows, m, p));
    }

    std::filesystem::path dir = o.out;
    if (dir.empty()) {
        const char* env = std::getenv(kOutDirEnv);
        dir = env != nullptr && *env != '\0' ? env : ".";
    }
    std::filesystem::create_directories(dir);
    write_file(dir / "aggregate.csv", aggregate_csv(result.rows));
    write_file(dir / "runs.csv", runs_csv(result.runs));
    write_file(dir / "separation.csv", separation_csv(separations));
    write_file(dir / "correlation.csv", correlation_csv(correlations));
    out << "wrote " << result.runs.size() << " runs, " << result.rows.size()
        << " aggregate rows to " << dir.string() << "\n";
    return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
    LabConfig c = load(o);
    Scenario s = read_trace(o, c.scenario.duration, c.scenario.area(), c.scenario.radio_range);
    ValidationResult v = validate(s, c.scenario);
    for (const Violation& violation : v.violations) out << violation.message << "\n";
    if (v.ok()) {
        out << "ok: " << s.node_count() << " nodes\n";
        return kExitOk;
    }
    return kExitInvalid;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mobility scenario laboratory for MANET studies", "mobilab"};
    app.require_subcommand(1);
    Options o;
    std::uint64_t seed = 0;
    auto* seed_opt = app.add_option("--seed", seed, "Scenario seed (overrides the config)");
    app.add_option("--config", o.config_path, "Config file ([scenario]/[routing]/[experiment])")
        ->check(CLI::ExistingFile);
    app.add_option("--out", o.out, "Output file, or directory for `experiment`");

    auto add_format = [&o](CLI::App* sub) {
        sub->add_option("--format", o.format, "Trace format")
            ->check(CLI::IsMember({"ns2", "bonnmotion"}));
    };

    auto* gen = app.add_subcommand("generate", "Generate a trace from the config");
    add_format(gen);
    auto* met = app.add_subcommand("metrics", "Mobility metrics of a trace file or generated scenario");
    add_format(met);
    met->add_option("--trace", o.trace_path, "Trace file (default: generate from config)");
    auto* sim = app.add_subcommand("simulate", "Routing performance of one run");
    add_format(sim);
    sim->add_option("--trace", o.trace_path, "Trace file (default: generate from config)");
    auto* exp = app.add_subcommand("experiment", "Multi-seed sweep with aggregate reports");
    auto* val = app.add_subcommand("validate", "Check a trace file against the config area");
    add_format(val);
    val->add_option("--trace", o.trace_path, "Trace file")->required();
    for (CLI::App* sub : {gen, met, sim, exp, val}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }
    if (seed_opt->count() > 0) o.seed = seed;

    try {
        if (gen->parsed()) return cmd_generate(o, out);
        if (met->parsed()) return cmd_metrics(o, out);
        if (sim->parsed()) return cmd_simulate(o, out);
        if (exp->parsed()) return cmd_experiment(o, out);
        if (val->parsed()) return cmd_validate(o, out);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace mobilab
