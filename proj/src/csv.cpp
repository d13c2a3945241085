#include "mobilab/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace mobilab {

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw std::logic_error("csv row width mismatch");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

std::string format_number(double v) {
    if (v == 0.0) return "0";  // folds -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace {

std::string count(std::size_t v) { return std::to_string(v); }

const std::vector<std::string> kMetricHeader = {
    "avg_node_degree_nodes", "avg_partitions_count", "link_changes_count",
    "link_changes_per_pair", "avg_link_duration_s",  "avg_relative_speed_mps",
    "sample_interval_s",     "radio_range_m",        "node_count",
    "samples"};

std::vector<std::string> metric_cells(const MetricReport& m) {
    return {format_number(m.avg_node_degree), format_number(m.avg_partitions),
            count(m.link_changes),            format_number(m.link_changes_per_pair),
            format_number(m.avg_link_duration), format_number(m.avg_relative_speed),
            format_number(m.sample_interval), format_number(m.radio_range),
            count(m.node_count),              count(m.samples)};
}

const std::vector<std::string> kPerfHeader = {
    "pdr_percent",          "avg_delay_s",          "nrl",
    "nrl_undefined",        "sent_packets",         "delivered_packets",
    "routing_packets",      "drop_discovery_failed", "drop_buffer_overflow",
    "drop_link_break",      "drop_no_route",        "drop_unfinished",
    "routing_radio_range_m"};

std::vector<std::string> perf_cells(const PerfReport& p) {
    return {format_number(p.pdr),
            format_number(p.avg_delay),
            p.nrl ? format_number(*p.nrl) : std::string(),
            p.nrl ? "0" : "1",
            count(p.sent),
            count(p.delivered),
            count(p.routing_packets),
            count(p.drops.discovery_failed),
            count(p.drops.buffer_overflow),
            count(p.drops.link_break),
            count(p.drops.no_route),
            count(p.drops.unfinished),
            format_number(p.routing_radio_range)};
}

template <typename T>
std::vector<T> concat(std::vector<T> a, const std::vector<T>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

std::string metrics_csv(std::span<const MetricReport> reports) {
    CsvTable t(kMetricHeader);
    for (const auto& m : reports) t.add_row(metric_cells(m));
    return t.str();
}

std::string perf_csv(std::span<const PerfReport> reports) {
    CsvTable t(kPerfHeader);
    for (const auto& p : reports) t.add_row(perf_cells(p));
    return t.str();
}

std::string runs_csv(std::span<const RunResult> runs) {
    std::vector<std::string> head = {"model", "max_speed_mps", "replicate", "seed"};
    head = concat(concat(head, kMetricHeader), kPerfHeader);
    CsvTable t(head);
    for (const RunResult& r : runs) {
        std::vector<std::string> cells = {std::string(to_string(r.model)), format_number(r.speed),
                                          count(r.replicate), std::to_string(r.seed)};
        cells = concat(cells, r.metrics ? metric_cells(*r.metrics)
                                        : std::vector<std::string>(kMetricHeader.size()));
        cells = concat(cells, r.performance ? perf_cells(*r.performance)
                                            : std::vector<std::string>(kPerfHeader.size()));
        t.add_row(std::move(cells));
    }
    return t.str();
}

std::string aggregate_csv(std::span<const AggregateRow> rows) {
    struct Column {
        const char* name;
        const char* unit;
        const Stat AggregateRow::*stat;
    };
    static const Column columns[] = {
        {"nd", "nodes", &AggregateRow::nd},
        {"np", "count", &AggregateRow::np},
        {"lc", "count", &AggregateRow::lc},
        {"lc_per_pair", "count", &AggregateRow::lc_per_pair},
        {"ld", "s", &AggregateRow::ld},
        {"rs", "mps", &AggregateRow::rs},
        {"pdr", "percent", &AggregateRow::pdr},
        {"delay", "s", &AggregateRow::delay},
        {"nrl", "ratio", &AggregateRow::nrl},
        {"sent", "packets", &AggregateRow::sent},
        {"delivered", "packets", &AggregateRow::delivered},
        {"routing", "packets", &AggregateRow::routing_packets},
    };
    std::vector<std::string> head = {"model", "max_speed_mps", "runs"};
    for (const Column& c : columns) {
        head.push_back(std::string(c.name) + "_mean_" + c.unit);
        head.push_back(std::string(c.name) + "_sd_" + c.unit);
    }
    head.push_back("nrl_undefined_runs");
    CsvTable t(head);
    for (const AggregateRow& row : rows) {
        std::vector<std::string> cells = {std::string(to_string(row.model)), format_number(row.speed),
                                          count(row.runs)};
        for (const Column& c : columns) {
            const Stat& s = row.*(c.stat);
            cells.push_back(s.n > 0 ? format_number(s.mean) : std::string());
            cells.push_back(s.n > 0 ? format_number(s.sd) : std::string());
        }
        cells.push_back(count(row.nrl_undefined));
        t.add_row(std::move(cells));
    }
    return t.str();
}

std::string separation_csv(std::span<const SeparationEntry> entries) {
    CsvTable t({"metric", "max_speed_mps", "entity_min", "entity_max", "group_min", "group_max",
                "separated", "group_higher", "margin", "relative_margin"});
    for (const SeparationEntry& e : entries) {
        t.add_row({std::string(to_string(e.metric)), format_number(e.speed),
                   format_number(e.entity_min), format_number(e.entity_max),
                   format_number(e.group_min), format_number(e.group_max),
                   e.separated ? "1" : "0", e.group_higher ? "1" : "0", format_number(e.margin),
                   format_number(e.relative_margin)});
    }
    return t.str();
}

std::string correlation_csv(std::span<const CorrelationEntry> entries) {
    CsvTable t({"mobility_metric", "performance_metric", "points", "spearman_rho", "sign",
                "degenerate_ties"});
    for (const CorrelationEntry& e : entries) {
        t.add_row({std::string(to_string(e.mobility)), std::string(to_string(e.performance)),
                   count(e.rho.points), format_number(e.rho.coefficient), std::to_string(e.sign),
                   e.rho.degenerate ? "1" : "0"});
    }
    return t.str();
}

}  // namespace mobilab
