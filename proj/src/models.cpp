#include "mobilab/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mobilab/errors.hpp"

namespace mobilab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Reference points of group members are resampled on this grid.
constexpr double kGroupSampleInterval = 1.0;

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

Scenario empty_scenario(const ScenarioConfig& config) {
    Scenario s;
    s.area_width = config.area_width;
    s.area_height = config.area_height;
    s.duration = config.duration;
    s.radio_range = config.radio_range;
    return s;
}

void push(std::vector<Waypoint>& path, double t, const Vec2& p) {
    if (!path.empty() && path.back().time == t) {
        path.back().position = p;
        return;
    }
    path.push_back({t, p});
}

// Cuts a path at t_end, interpolating the final point.
void truncate(std::vector<Waypoint>& path, double t_end) {
    auto it = std::upper_bound(path.begin(), path.end(), t_end,
                               [](double t, const Waypoint& w) { return t < w.time; });
    if (it == path.end()) return;
    const Waypoint& prev = *(it - 1);
    Waypoint cut{t_end, lerp(prev.position, it->position,
                             (t_end - prev.time) / (it->time - prev.time))};
    path.erase(it, path.end());
    push(path, t_end, cut.position);
}

// Random waypoint walk from `start`, covering [0, t_end].
std::vector<Waypoint> rwp_path(const Vec2& start, const ScenarioConfig& config,
                               RandomStream& rng, double t_end) {
    const Area area = config.area();
    std::vector<Waypoint> path{{0.0, start}};
    double t = 0.0;
    Vec2 pos = start;
    while (t < t_end) {
        Vec2 dest = rng.in_area(area);
        double speed = rng.uniform(config.min_speed, config.max_speed);
        double dist = distance(pos, dest);
        if (speed <= 0.0) {
            push(path, t_end, pos);
            break;
        }
        if (dist > 0.0) {
            t += dist / speed;
            pos = dest;
            push(path, t, pos);
        }
        double pause = rng.uniform(0.0, config.max_pause);
        if (pause > 0.0) {
            t += pause;
            push(path, t, pos);
        }
        if (dist == 0.0 && pause == 0.0) {
            push(path, t_end, pos);
            break;
        }
    }
    truncate(path, t_end);
    return path;
}

// Offset moved toward `candidate` by at most `cap`.
Vec2 drift(const Vec2& offset, const Vec2& candidate, double cap) {
    Vec2 step = candidate - offset;
    double len = norm(step);
    if (len > cap) step = len > 0.0 ? step * (cap / len) : Vec2{};
    return offset + step;
}

// Allowed offset change over dt when the reference point moves `ref_move`.
double drift_cap(const ScenarioConfig& config, double ref_move, double dt) {
    double cap = std::min(config.group_drift_speed * dt, config.max_speed * dt - ref_move);
    return std::max(cap, 0.0);
}

// Uniform point in the disc around `center`, restricted to the area.
Vec2 point_near(const Vec2& center, double radius, const Area& area, RandomStream& rng) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        Vec2 p = center + rng.in_disc(radius);
        if (area.contains(p)) return p;
    }
    return center;
}

}  // namespace

GmState gm_update(const GmState& state, double gauss_v, double gauss_d, double max_speed) {
    const double a = state.alpha;
    if (!(a >= 0.0 && a <= 1.0))
        throw ConfigError("gm_alpha must lie in [0, 1], got " + std::to_string(a));
    const double noise = std::sqrt(1.0 - a * a);
    GmState next = state;
    next.speed = a * state.speed + (1.0 - a) * state.mean_speed + noise * gauss_v;
    next.direction = a * state.direction + (1.0 - a) * state.mean_direction + noise * gauss_d;
    next.speed = std::clamp(next.speed, 0.0, max_speed);
    return next;
}

Vec2 gm_advance(const Vec2& position, const GmState& state, double dt) {
    double step = state.speed * dt;
    return {position.x + step * std::cos(state.direction),
            position.y + step * std::sin(state.direction)};
}

int GroupAssignment::group_count() const {
    if (group_of.empty()) return 0;
    return *std::max_element(group_of.begin(), group_of.end()) + 1;
}

std::vector<int> GroupAssignment::members(int group) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < group_of.size(); ++i)
        if (group_of[i] == group) out.push_back(static_cast<int>(i));
    return out;
}

GroupAssignment assign_groups(int node_count, int group_size) {
    if (group_size < 1) throw ConfigError("group_size must be at least 1");
    GroupAssignment g;
    g.group_of.resize(node_count);
    g.leader.resize(node_count);
    for (int i = 0; i < node_count; ++i) {
        g.group_of[i] = i / group_size;
        g.leader[i] = i % group_size == 0;
    }
    return g;
}

void check_config(const ScenarioConfig& c) {
    require(c.node_count >= 1, "node_count must be at least 1");
    require(c.area_width > 0.0 && c.area_height > 0.0, "area_width and area_height must be positive");
    require(c.duration > 0.0, "duration must be positive");
    require(c.max_speed > 0.0, "max_speed must be positive");
    require(c.min_speed >= 0.0 && c.min_speed <= c.max_speed,
            "min_speed must lie in [0, max_speed]");
    require(c.max_pause >= 0.0, "max_pause must be non-negative");
    require(c.radio_range > 0.0, "radio_range_metrics must be positive");
    require(c.sample_interval > 0.0, "sample_interval must be positive");
    switch (c.model) {
        case MobilityModel::RWP: break;
        case MobilityModel::GM:
            require(c.gm_alpha >= 0.0 && c.gm_alpha <= 1.0, "gm_alpha must lie in [0, 1]");
            require(c.gm_update_interval > 0.0, "gm_update_interval must be positive");
            require(c.gm_speed_sigma >= 0.0 && c.gm_direction_sigma >= 0.0,
                    "gm sigmas must be non-negative");
            break;
        case MobilityModel::RPGM:
        case MobilityModel::NCMM:
            require(c.group_size >= 1, "group_size must be at least 1");
            require(c.group_size <= c.node_count, "group_size " + std::to_string(c.group_size) +
                                                      " exceeds node_count " +
                                                      std::to_string(c.node_count));
            require(c.rpgm_max_deviation >= 0.0, "rpgm_max_deviation must be non-negative");
            require(c.ncmm_roam_radius >= 0.0, "ncmm_roam_radius must be non-negative");
            require(c.group_drift_speed >= 0.0, "group_drift_speed must be non-negative");
            break;
    }
}

Scenario generate_rwp(const ScenarioConfig& config, RandomStream& rng) {
    check_config(config);
    Scenario s = empty_scenario(config);
    for (int i = 0; i < config.node_count; ++i) {
        Vec2 start = rng.in_area(config.area());
        s.traces.push_back({i, rwp_path(start, config, rng, config.duration)});
    }
    return s;
}

Scenario generate_gm(const ScenarioConfig& config, RandomStream& rng) {
    check_config(config);
    const Area area = config.area();
    const Vec2 center = area.center();
    const double dt = config.gm_update_interval;
    const double margin = 2.0 * config.max_speed * dt;
    const double mean_speed = config.max_speed / 2.0;

    Scenario s = empty_scenario(config);
    for (int i = 0; i < config.node_count; ++i) {
        Vec2 pos = rng.in_area(area);
        GmState state;
        state.alpha = config.gm_alpha;
        state.speed = mean_speed;
        state.mean_speed = mean_speed;
        state.direction = rng.uniform(0.0, kTwoPi);
        state.mean_direction = state.direction;

        std::vector<Waypoint> path{{0.0, pos}};
        double t = 0.0;
        for (long k = 1; t < config.duration; ++k) {
            double next_t = std::min(config.duration, static_cast<double>(k) * dt);
            bool near_edge = pos.x < margin || pos.y < margin || area.width - pos.x < margin ||
                             area.height - pos.y < margin;
            if (near_edge) {
                // Steer toward the centre, choosing the angle branch nearest the heading.
                double toward = std::atan2(center.y - pos.y, center.x - pos.x);
                toward += kTwoPi * std::round((state.direction - toward) / kTwoPi);
                state.mean_direction = toward;
            }
            double gv = config.gm_speed_sigma * rng.standard_normal();
            double gd = config.gm_direction_sigma * rng.standard_normal();
            state = gm_update(state, gv, gd, config.max_speed);
            pos = area.clamp(gm_advance(pos, state, next_t - t));
            t = next_t;
            path.push_back({t, pos});
        }
        s.traces.push_back({i, std::move(path)});
    }
    return s;
}

Scenario generate_rpgm(const ScenarioConfig& config, RandomStream& rng, GroupAssignment* groups) {
    check_config(config);
    const Area area = config.area();
    GroupAssignment assignment = assign_groups(config.node_count, config.group_size);
    Scenario s = empty_scenario(config);
    s.traces.resize(config.node_count);

    for (int g = 0; g < assignment.group_count(); ++g) {
        std::vector<int> members = assignment.members(g);
        Vec2 start = rng.in_area(area);
        NodeTrace leader_path{-1, rwp_path(start, config, rng, config.duration)};

        // Sampling grid plus the leader's turning points, so the leader is
        // linear between consecutive sample times.
        std::vector<double> times;
        for (long k = 0; k * kGroupSampleInterval < config.duration; ++k)
            times.push_back(k * kGroupSampleInterval);
        times.push_back(config.duration);
        for (const Waypoint& w : leader_path.waypoints) times.push_back(w.time);
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());

        std::vector<Vec2> ref(times.size());
        for (std::size_t k = 0; k < times.size(); ++k) ref[k] = position_at(leader_path, times[k]);

        for (int node : members) {
            NodeTrace& trace = s.traces[node];
            trace.node_id = node;
            trace.waypoints.reserve(times.size());
            const bool is_leader = assignment.leader[node];
            Vec2 offset =
                is_leader ? Vec2{} : area.clamp(ref[0] + rng.in_disc(config.rpgm_max_deviation)) - ref[0];
            trace.waypoints.push_back({times[0], ref[0] + offset});
            for (std::size_t k = 1; k < times.size(); ++k) {
                if (!is_leader) {
                    double dt = times[k] - times[k - 1];
                    double cap = drift_cap(config, distance(ref[k], ref[k - 1]), dt);
                    offset = drift(offset, rng.in_disc(config.rpgm_max_deviation), cap);
                    offset = area.clamp(ref[k] + offset) - ref[k];
                }
                trace.waypoints.push_back({times[k], ref[k] + offset});
            }
        }
    }
    if (groups != nullptr) *groups = std::move(assignment);
    return s;
}

Scenario generate_ncmm(const ScenarioConfig& config, RandomStream& rng, GroupAssignment* groups) {
    check_config(config);
    const Area area = config.area();
    const double radius = config.ncmm_roam_radius;
    GroupAssignment assignment = assign_groups(config.node_count, config.group_size);
    Scenario s = empty_scenario(config);
    s.traces.resize(config.node_count);

    for (int g = 0; g < assignment.group_count(); ++g) {
        Vec2 start = rng.in_area(area);
        NodeTrace anchor{g, rwp_path(start, config, rng, config.duration)};
        const auto& aw = anchor.waypoints;

        for (int node : assignment.members(g)) {
            std::vector<Waypoint> path;
            Vec2 pos = point_near(aw.front().position, radius, area, rng);
            path.push_back({0.0, pos});
            for (std::size_t k = 1; k < aw.size(); ++k) {
                const Waypoint& a = aw[k - 1];
                const Waypoint& b = aw[k];
                const double seg_end = b.time;
                if (a.position == b.position) {
                    // Anchor pauses: roam inside its disc.
                    double t = a.time;
                    while (t < seg_end) {
                        Vec2 dest = point_near(a.position, radius, area, rng);
                        double speed = rng.uniform(config.min_speed, config.max_speed);
                        if (speed <= 0.0) break;
                        double travel = distance(pos, dest) / speed;
                        if (t + travel >= seg_end) {
                            pos = lerp(pos, dest, (seg_end - t) / travel);
                            break;
                        }
                        if (travel > 0.0) {
                            t += travel;
                            pos = dest;
                            push(path, t, pos);
                        }
                        double pause = rng.uniform(0.0, config.max_pause);
                        if (t + pause >= seg_end || (travel == 0.0 && pause == 0.0)) break;
                        if (pause > 0.0) {
                            t += pause;
                            push(path, t, pos);
                        }
                    }
                    push(path, seg_end, pos);
                } else {
                    // Anchor relocates: drift the offset and move straight to the new disc.
                    double dt = b.time - a.time;
                    Vec2 offset = pos - a.position;
                    double cap = drift_cap(config, distance(a.position, b.position), dt);
                    offset = drift(offset, rng.in_disc(radius), cap);
                    pos = area.clamp(b.position + offset);
                    push(path, seg_end, pos);
                }
            }
            if (path.back().time < config.duration) push(path, config.duration, pos);
            s.traces[node] = {node, std::move(path)};
        }
        assignment.anchors.push_back(std::move(anchor));
    }
    if (groups != nullptr) *groups = std::move(assignment);
    return s;
}

Scenario generate(const ScenarioConfig& config, RandomStream& rng) {
    switch (config.model) {
        case MobilityModel::RWP: return generate_rwp(config, rng);
        case MobilityModel::GM: return generate_gm(config, rng);
        case MobilityModel::RPGM: return generate_rpgm(config, rng);
        case MobilityModel::NCMM: return generate_ncmm(config, rng);
    }
    throw ConfigError("unknown model");
}

Scenario generate(const ScenarioConfig& config) {
    RandomStream rng(config.seed);
    return generate(config, rng);
}

}  // namespace mobilab
