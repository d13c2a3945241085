#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "mobilab/csv.hpp"

using namespace mobilab;

namespace {

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

}  // namespace

TEST_CASE("empty row sets give the header only") {
    CHECK(count_lines(metrics_csv({})) == 1);
    CHECK(count_lines(perf_csv({})) == 1);
    CHECK(count_lines(aggregate_csv({})) == 1);
    CHECK(count_lines(separation_csv({})) == 1);
    CHECK(count_lines(correlation_csv({})) == 1);
}

TEST_CASE("one metric report gives one data row with units in the header") {
    MetricReport r;
    r.avg_node_degree = 2.5;
    std::string text = metrics_csv(std::span(&r, 1));
    CHECK(count_lines(text) == 2);
    std::string header = text.substr(0, text.find('\n'));
    CHECK(header.find("_s") != std::string::npos);
    CHECK(header.find("_mps") != std::string::npos);
}

TEST_CASE("undefined NRL is an empty cell with a flag") {
    PerfReport p;
    p.sent = 10;
    std::string text = perf_csv(std::span(&p, 1));
    auto header = split(text.substr(0, text.find('\n')));
    auto row = split(text.substr(text.find('\n') + 1, text.size() - text.find('\n') - 2));
    REQUIRE(header.size() == row.size());
    auto nrl = std::find(header.begin(), header.end(), "nrl") - header.begin();
    auto flag = std::find(header.begin(), header.end(), "nrl_undefined") - header.begin();
    REQUIRE(static_cast<std::size_t>(flag) < header.size());
    REQUIRE(static_cast<std::size_t>(nrl) < header.size());
    CHECK(row[static_cast<std::size_t>(flag)] == "1");
    CHECK(row[static_cast<std::size_t>(nrl)].empty());
    CHECK(text.find("inf") == std::string::npos);

    p.delivered = 5;
    p.nrl = 0.25;
    std::string defined = perf_csv(std::span(&p, 1));
    CHECK(split(defined.substr(defined.find('\n') + 1))[static_cast<std::size_t>(flag)] == "0");
}

TEST_CASE("aggregate of four models by four speeds has sixteen rows") {
    std::vector<AggregateRow> rows;
    for (MobilityModel m : kAllModels)
        for (double v : {5.0, 10.0, 15.0, 20.0}) {
            AggregateRow r;
            r.model = m;
            r.speed = v;
            rows.push_back(r);
        }
    CHECK(count_lines(aggregate_csv(rows)) == 17);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(20.0) == "20");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333");
}
