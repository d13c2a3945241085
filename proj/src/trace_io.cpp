#include "mobilab/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mobilab/errors.hpp"

namespace mobilab {

namespace {

void append_fixed(std::string& out, double v) {
    char buf[64];
    int len = std::snprintf(buf, sizeof buf, "%.6f", v);
    out.append(buf, static_cast<std::size_t>(len));
}

// Six decimals, or more when six would misstate the value by over 1e-12
// relative. Arrival times are derived from speed, so its rounding error
// accumulates along the segment.
std::string speed_text(double v) {
    char buf[64];
    for (int digits = 6; digits < 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*f", digits, v);
        if (std::abs(std::strtod(buf, nullptr) - v) <= 1e-12 * std::abs(v)) break;
    }
    return buf;
}

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r' || line[i] == '"'))
            ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '"')
            ++i;
        if (i > start) out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

double to_double(const Token& t, std::size_t line) {
    double v = 0.0;
    auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || end != t.text.data() + t.text.size() || !std::isfinite(v))
        throw ParseError("expected a number, got '" + std::string(t.text) + "'", line, t.column);
    return v;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    while (!text.empty() || line_no == 0) {
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        ++line_no;
        fn(line, line_no);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
}

Scenario make_scenario(double duration, const Area& area) {
    Scenario s;
    s.area_width = area.width;
    s.area_height = area.height;
    s.duration = duration;
    return s;
}

void check_inside(const Area& area, const Vec2& p, std::size_t line, std::size_t column) {
    if (!area.contains(p)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "point (%g, %g) outside the %gx%g area", p.x, p.y,
                      area.width, area.height);
        throw ParseError(buf, line, column);
    }
}

// "$node_(12)" -> 12
int node_index(const Token& t, std::size_t line) {
    constexpr std::string_view prefix = "$node_(";
    std::string_view s = t.text;
    if (s.substr(0, prefix.size()) != prefix || s.size() < prefix.size() + 2 || s.back() != ')')
        throw ParseError("expected $node_(<id>), got '" + std::string(s) + "'", line, t.column);
    std::string_view digits = s.substr(prefix.size(), s.size() - prefix.size() - 1);
    int id = -1;
    auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
    if (ec != std::errc() || end != digits.data() + digits.size() || id < 0)
        throw ParseError("bad node id '" + std::string(digits) + "'", line, t.column);
    return id;
}

}  // namespace

std::string export_ns2_movements(const Scenario& scenario) {
    std::string out;
    for (const NodeTrace& trace : scenario.traces) {
        if (trace.waypoints.empty()) continue;
        const std::string node = "$node_(" + std::to_string(trace.node_id) + ")";
        const Vec2 p0 = trace.waypoints.front().position;
        out += node + " set X_ ";
        append_fixed(out, p0.x);
        out += "\n" + node + " set Y_ ";
        append_fixed(out, p0.y);
        out += "\n" + node + " set Z_ 0.000000\n";
    }
    for (const NodeTrace& trace : scenario.traces) {
        const auto& w = trace.waypoints;
        for (std::size_t i = 1; i < w.size(); ++i) {
            double dt = w[i].time - w[i - 1].time;
            double dist = distance(w[i].position, w[i - 1].position);
            if (dt <= 0.0 || dist == 0.0) continue;
            const double speed = dist / dt;
            // Sub-micrometre-per-second drifts are dropped.
            if (speed < 5e-7) continue;
            out += "$ns_ at ";
            append_fixed(out, w[i - 1].time);
            out += " \"$node_(" + std::to_string(trace.node_id) + ") setdest ";
            append_fixed(out, w[i].position.x);
            out += ' ';
            append_fixed(out, w[i].position.y);
            out += ' ';
            out += speed_text(speed);
            out += "\"\n";
        }
    }
    return out;
}

Scenario import_ns2_movements(std::string_view text, double duration, const Area& area) {
    struct Command {
        double time;
        Vec2 dest;
        double speed;
        std::size_t line;
        std::size_t column;
    };
    struct Pending {
        std::optional<double> x, y;
        std::vector<Command> moves;
        std::size_t line = 0;
    };
    std::map<int, Pending> nodes;

    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        auto tokens = tokenize(line);
        if (tokens.empty() || tokens[0].text.front() == '#') return;
        if (tokens[0].text == "$ns_") {
            if (tokens.size() != 8 || tokens[1].text != "at" || tokens[4].text != "setdest")
                throw ParseError("expected '$ns_ at <t> \"$node_(i) setdest <x> <y> <speed>\"',",
                                 line_no, tokens[0].column);
            int id = node_index(tokens[3], line_no);
            Command c{to_double(tokens[2], line_no),
                      {to_double(tokens[5], line_no), to_double(tokens[6], line_no)},
                      to_double(tokens[7], line_no), line_no, tokens[5].column};
            if (c.time < 0.0) throw ParseError("negative time", line_no, tokens[2].column);
            if (!(c.speed > 0.0)) throw ParseError("speed must be positive", line_no, tokens[7].column);
            check_inside(area, c.dest, line_no, tokens[5].column);
            nodes[id].moves.push_back(c);
            return;
        }
        if (tokens.size() != 4 || tokens[1].text != "set")
            throw ParseError("expected '$node_(i) set X_|Y_|Z_ <value>'", line_no, tokens[0].column);
        int id = node_index(tokens[0], line_no);
        double v = to_double(tokens[3], line_no);
        Pending& node = nodes[id];
        if (node.line == 0) node.line = line_no;
        if (tokens[2].text == "X_") node.x = v;
        else if (tokens[2].text == "Y_") node.y = v;
        else if (tokens[2].text != "Z_")
            throw ParseError("unknown attribute '" + std::string(tokens[2].text) + "'", line_no,
                             tokens[2].column);
    });

    Scenario s = make_scenario(duration, area);
    for (auto& [id, node] : nodes) {
        std::size_t line = node.line != 0 ? node.line : node.moves.front().line;
        if (!node.x || !node.y) throw ParseError("node " + std::to_string(id) + " has no initial X_/Y_", line, 1);
        Vec2 start{*node.x, *node.y};
        check_inside(area, start, line, 1);
        std::stable_sort(node.moves.begin(), node.moves.end(),
                         [](const Command& a, const Command& b) { return a.time < b.time; });
        std::vector<Waypoint> w{{0.0, start}};
        for (const Command& c : node.moves) {
            Waypoint& last = w.back();
            if (last.time > c.time) {
                // Still travelling: stop where the node is at the new command.
                const Waypoint& prev = w[w.size() - 2];
                Vec2 here = lerp(prev.position, last.position, (c.time - prev.time) / (last.time - prev.time));
                last = {c.time, here};
            } else if (last.time < c.time) {
                w.push_back({c.time, last.position});
            }
            Vec2 from = w.back().position;
            double travel = distance(from, c.dest) / c.speed;
            if (travel > 0.0) w.push_back({c.time + travel, c.dest});
        }
        if (w.back().time < duration) w.push_back({duration, w.back().position});
        s.traces.push_back({id, std::move(w)});
    }
    for (std::size_t i = 0; i < s.traces.size(); ++i) {
        if (s.traces[i].node_id != static_cast<int>(i))
            throw ParseError("node ids must be 0..N-1; node " + std::to_string(i) + " is missing", 0, 0);
    }
    return s;
}

std::string export_bonnmotion(const Scenario& scenario) {
    std::string out;
    for (const NodeTrace& trace : scenario.traces) {
        bool first = true;
        for (const Waypoint& w : trace.waypoints) {
            if (!first) out += ' ';
            first = false;
            append_fixed(out, w.time);
            out += ' ';
            append_fixed(out, w.position.x);
            out += ' ';
            append_fixed(out, w.position.y);
        }
        out += '\n';
    }
    return out;
}

Scenario import_bonnmotion(std::string_view text, double duration, const Area& area) {
    Scenario s = make_scenario(duration, area);
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        auto tokens = tokenize(line);
        if (tokens.empty()) return;
        if (tokens.size() % 3 != 0)
            throw ParseError("expected 't x y' triples, found " + std::to_string(tokens.size()) +
                                 " values",
                             line_no, tokens.back().column);
        NodeTrace trace;
        trace.node_id = static_cast<int>(s.traces.size());
        for (std::size_t i = 0; i < tokens.size(); i += 3) {
            Waypoint w{to_double(tokens[i], line_no),
                       {to_double(tokens[i + 1], line_no), to_double(tokens[i + 2], line_no)}};
            if (w.time < 0.0) throw ParseError("negative time", line_no, tokens[i].column);
            if (!trace.waypoints.empty() && w.time < trace.waypoints.back().time)
                throw ParseError("time regression", line_no, tokens[i].column);
            check_inside(area, w.position, line_no, tokens[i + 1].column);
            trace.waypoints.push_back(w);
        }
        s.traces.push_back(std::move(trace));
    });
    return s;
}

}  // namespace mobilab
