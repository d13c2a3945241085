#pragma once

#include <span>
#include <string>
#include <vector>

#include "mobilab/experiment.hpp"
#include "mobilab/metrics.hpp"
#include "mobilab/routesim.hpp"

namespace mobilab {

// Header plus rows; cells are written verbatim, comma separated, '\n' ended.
class CsvTable {
 public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> cells);
    std::size_t rows() const { return rows_.size(); }
    std::string str() const;

 private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Shortest round-trippable-enough decimal form ("%.9g").
std::string format_number(double v);

std::string metrics_csv(std::span<const MetricReport> reports);
// An undefined NRL is an empty cell with nrl_undefined = 1.
std::string perf_csv(std::span<const PerfReport> reports);
std::string runs_csv(std::span<const RunResult> runs);
std::string aggregate_csv(std::span<const AggregateRow> rows);
std::string separation_csv(std::span<const SeparationEntry> entries);
std::string correlation_csv(std::span<const CorrelationEntry> entries);

}  // namespace mobilab
