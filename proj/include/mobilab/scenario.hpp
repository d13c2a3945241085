#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mobilab/geometry.hpp"

namespace mobilab {

struct Waypoint {
    double time = 0.0;  // seconds
    Vec2 position;

    friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

// Piecewise-linear path. A repeated position at a later time is a pause.
struct NodeTrace {
    int node_id = 0;
    std::vector<Waypoint> waypoints;

    friend bool operator==(const NodeTrace&, const NodeTrace&) = default;
};

struct Scenario {
    double area_width = 0.0;
    double area_height = 0.0;
    double duration = 0.0;
    double radio_range = 0.0;
    std::vector<NodeTrace> traces;

    std::size_t node_count() const { return traces.size(); }
    Area area() const { return {area_width, area_height}; }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class MobilityModel { RWP, GM, RPGM, NCMM };

inline constexpr MobilityModel kAllModels[] = {MobilityModel::RWP, MobilityModel::GM,
                                               MobilityModel::RPGM, MobilityModel::NCMM};

std::string_view to_string(MobilityModel model);
// Accepts the canonical upper-case names only.
std::optional<MobilityModel> parse_model(std::string_view name);
bool is_group_model(MobilityModel model);

// Inputs for one scenario generation. Defaults reproduce the 90-node,
// 1000 m x 1000 m, 20 m/s metric study.
struct ScenarioConfig {
    MobilityModel model = MobilityModel::RWP;
    int node_count = 90;
    double area_width = 1000.0;
    double area_height = 1000.0;
    double min_speed = 0.5;
    double max_speed = 20.0;
    double max_pause = 10.0;
    double duration = 900.0;
    double radio_range = 75.0;
    double sample_interval = 1.0;
    int group_size = 5;

    double gm_alpha = 0.75;
    double gm_update_interval = 1.0;
    // Standard deviations of the Gaussian innovations (m/s and rad).
    double gm_speed_sigma = 1.0;
    double gm_direction_sigma = 1.0;

    double rpgm_max_deviation = 50.0;
    double ncmm_roam_radius = 100.0;
    // Cap on how fast a member's offset from its reference point may change.
    double group_drift_speed = 2.0;

    std::uint64_t seed = 1;

    Area area() const { return {area_width, area_height}; }
};

// Position on the trace at time t; clamps to the last waypoint.
// Throws UsageError for an empty trace.
Vec2 position_at(const NodeTrace& trace, double t);

// Derivative of the segment containing t. At an exact waypoint time the
// following segment is used; zero after the last waypoint.
Vec2 velocity_at(const NodeTrace& trace, double t);

enum class ViolationKind {
    EmptyScenario,
    EmptyTrace,
    NonFiniteValue,
    OutOfBounds,
    TimeRegression,
    BadStartTime,
    ShortTrace,
    DuplicateNodeId,
    NodeIdGap,
    SpeedExceeded,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    int node_id = -1;
    std::size_t waypoint = 0;
    std::string message;
};

struct ValidationResult {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(ViolationKind kind) const;
};

ValidationResult validate(const Scenario& scenario);
// Additionally checks segment speeds against config.max_speed (1e-6 relative).
ValidationResult validate(const Scenario& scenario, const ScenarioConfig& config);

}  // namespace mobilab
