#include "mobilab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mobilab/errors.hpp"

namespace mobilab {

std::string_view to_string(MobilityModel model) {
    switch (model) {
        case MobilityModel::RWP: return "RWP";
        case MobilityModel::GM: return "GM";
        case MobilityModel::RPGM: return "RPGM";
        case MobilityModel::NCMM: return "NCMM";
    }
    return "?";
}

std::optional<MobilityModel> parse_model(std::string_view name) {
    for (MobilityModel m : kAllModels)
        if (to_string(m) == name) return m;
    return std::nullopt;
}

bool is_group_model(MobilityModel model) {
    return model == MobilityModel::RPGM || model == MobilityModel::NCMM;
}

namespace {

// Index of the first waypoint strictly later than t.
std::size_t segment_end(const NodeTrace& trace, double t) {
    if (trace.waypoints.empty())
        throw UsageError("trace of node " + std::to_string(trace.node_id) + " is empty");
    auto it = std::upper_bound(trace.waypoints.begin(), trace.waypoints.end(), t,
                               [](double value, const Waypoint& w) { return value < w.time; });
    return static_cast<std::size_t>(it - trace.waypoints.begin());
}

}  // namespace

Vec2 position_at(const NodeTrace& trace, double t) {
    std::size_t end = segment_end(trace, t);
    const auto& w = trace.waypoints;
    if (end == 0) return w.front().position;
    if (end == w.size()) return w.back().position;
    const Waypoint& a = w[end - 1];
    const Waypoint& b = w[end];
    double f = (t - a.time) / (b.time - a.time);
    return lerp(a.position, b.position, f);
}

Vec2 velocity_at(const NodeTrace& trace, double t) {
    std::size_t end = segment_end(trace, t);
    const auto& w = trace.waypoints;
    if (end == 0 || end == w.size()) return {};
    const Waypoint& a = w[end - 1];
    const Waypoint& b = w[end];
    return (b.position - a.position) / (b.time - a.time);
}

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::EmptyScenario: return "empty scenario";
        case ViolationKind::EmptyTrace: return "empty trace";
        case ViolationKind::NonFiniteValue: return "non-finite value";
        case ViolationKind::OutOfBounds: return "out of bounds";
        case ViolationKind::TimeRegression: return "time regression";
        case ViolationKind::BadStartTime: return "bad start time";
        case ViolationKind::ShortTrace: return "short trace";
        case ViolationKind::DuplicateNodeId: return "duplicate node id";
        case ViolationKind::NodeIdGap: return "node id gap";
        case ViolationKind::SpeedExceeded: return "speed exceeded";
    }
    return "?";
}

bool ValidationResult::has(ViolationKind kind) const {
    return std::any_of(violations.begin(), violations.end(),
                       [kind](const Violation& v) { return v.kind == kind; });
}

namespace {

void add(ValidationResult& out, ViolationKind kind, int node, std::size_t wp,
         const std::string& detail) {
    std::ostringstream msg;
    msg << to_string(kind) << ": node " << node;
    if (kind != ViolationKind::DuplicateNodeId && kind != ViolationKind::NodeIdGap)
        msg << " waypoint " << wp;
    if (!detail.empty()) msg << " (" << detail << ")";
    out.violations.push_back({kind, node, wp, msg.str()});
}

ValidationResult check(const Scenario& scenario, const ScenarioConfig* config) {
    ValidationResult out;
    if (scenario.traces.empty()) {
        out.violations.push_back({ViolationKind::EmptyScenario, -1, 0,
                                  "empty scenario: node_count must be at least 1"});
        return out;
    }
    const Area area = scenario.area();
    const std::size_t n = scenario.traces.size();
    std::vector<int> seen(n, 0);

    for (const NodeTrace& trace : scenario.traces) {
        const int id = trace.node_id;
        if (id >= 0 && static_cast<std::size_t>(id) < n) {
            if (seen[id]++ > 0) add(out, ViolationKind::DuplicateNodeId, id, 0, "");
        }
        const auto& w = trace.waypoints;
        if (w.empty()) {
            add(out, ViolationKind::EmptyTrace, id, 0, "");
            continue;
        }
        if (w.front().time != 0.0) {
            add(out, ViolationKind::BadStartTime, id, 0,
                "first time " + std::to_string(w.front().time));
        }
        for (std::size_t i = 0; i < w.size(); ++i) {
            const Waypoint& p = w[i];
            if (!std::isfinite(p.time) || !is_finite(p.position)) {
                add(out, ViolationKind::NonFiniteValue, id, i, "");
                continue;
            }
            if (!area.contains(p.position)) {
                std::ostringstream d;
                d << "(" << p.position.x << ", " << p.position.y << ")";
                add(out, ViolationKind::OutOfBounds, id, i, d.str());
            }
            if (i == 0) continue;
            const Waypoint& q = w[i - 1];
            if (p.time < q.time) {
                add(out, ViolationKind::TimeRegression, id, i,
                    std::to_string(q.time) + " -> " + std::to_string(p.time));
            } else if (config != nullptr) {
                double dist = distance(p.position, q.position);
                double dt = p.time - q.time;
                double limit = config->max_speed * (1.0 + 1e-6);
                if ((dt == 0.0 && dist > 0.0) || (dt > 0.0 && dist / dt > limit)) {
                    add(out, ViolationKind::SpeedExceeded, id, i,
                        dt > 0.0 ? std::to_string(dist / dt) + " m/s" : "jump");
                }
            }
        }
        if (w.back().time < scenario.duration - 1e-9) {
            add(out, ViolationKind::ShortTrace, id, w.size() - 1,
                "ends at " + std::to_string(w.back().time));
        }
    }
    for (std::size_t id = 0; id < n; ++id)
        if (seen[id] == 0) add(out, ViolationKind::NodeIdGap, static_cast<int>(id), 0, "missing");
    return out;
}

}  // namespace

ValidationResult validate(const Scenario& scenario) { return check(scenario, nullptr); }

ValidationResult validate(const Scenario& scenario, const ScenarioConfig& config) {
    return check(scenario, &config);
}

}  // namespace mobilab
