#pragma once

#include <string>
#include <string_view>

#include "mobilab/experiment.hpp"
#include "mobilab/routesim.hpp"
#include "mobilab/scenario.hpp"

namespace mobilab {

// Everything a config file can set. Keys follow the parameter tables:
//
//   [scenario]   model, node_count, area_width, area_height, min_speed,
//                max_speed, max_pause, duration, radio_range_metrics,
//                sample_interval, group_size, gm_alpha, gm_update_interval,
//                gm_speed_sigma, gm_direction_sigma, rpgm_max_deviation,
//                ncmm_roam_radius, group_drift_speed, seed
//   [routing]    transmission_range_routing, data_rate, per_hop_processing,
//                rreq_ttl_max, route_lifetime, discovery_timeout,
//                max_buffered_per_flow, rreq_retries, broadcast_jitter_max,
//                rreq_holddown, max_connections, packet_size, sending_rate,
//                flow_start_spread, simulation_time
//   [experiment] models, speed_points, seeds, outputs, parallelism
struct LabConfig {
    ScenarioConfig scenario;
    TrafficConfig traffic;
    SimParams sim;
    ExperimentPlan experiment;

    // experiment with base/traffic/sim filled from the other sections.
    ExperimentPlan plan() const;
};

// Parses "key = value" lines under [section] headers; '#' starts a comment.
// Keys are case-sensitive; unknown keys and sections are errors. Throws
// ConfigError with "<origin>:<line>: ..." messages.
LabConfig parse_config(std::string_view text, std::string_view origin = "<config>");

LabConfig load_config(const std::string& path);

// Config text that parses back to `config`.
std::string render_config(const LabConfig& config);

}  // namespace mobilab
