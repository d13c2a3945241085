#pragma once

#include <limits>
#include <vector>

#include "mobilab/geometry.hpp"
#include "mobilab/random.hpp"
#include "mobilab/scenario.hpp"

namespace mobilab {

// Gauss-Markov speed/direction state of one node.
struct GmState {
    double speed = 0.0;           // m/s
    double direction = 0.0;       // rad
    double mean_speed = 0.0;      // m/s
    double mean_direction = 0.0;  // rad
    double alpha = 0.0;           // memory, in [0, 1]
};

// One autoregressive step:
//   speed'     = a*speed     + (1-a)*mean_speed     + sqrt(1-a^2)*gauss_v
//   direction' = a*direction + (1-a)*mean_direction + sqrt(1-a^2)*gauss_d
// The innovations are passed already scaled. The new speed is clamped to
// [0, max_speed]. Throws ConfigError when alpha is outside [0, 1].
GmState gm_update(const GmState& state, double gauss_v, double gauss_d,
                  double max_speed = std::numeric_limits<double>::infinity());

// Moves `position` for dt seconds along the state's heading at its speed.
Vec2 gm_advance(const Vec2& position, const GmState& state, double dt);

// Partition of node ids into consecutive groups of group_size (last group
// may be smaller). The first node of each group is its leader.
struct GroupAssignment {
    std::vector<int> group_of;
    std::vector<bool> leader;
    // NCMM only: the invisible anchor path of each group.
    std::vector<NodeTrace> anchors;

    int group_count() const;
    std::vector<int> members(int group) const;
};

GroupAssignment assign_groups(int node_count, int group_size);

// Throws ConfigError naming the first invalid field.
void check_config(const ScenarioConfig& config);

Scenario generate_rwp(const ScenarioConfig& config, RandomStream& rng);
Scenario generate_gm(const ScenarioConfig& config, RandomStream& rng);
Scenario generate_rpgm(const ScenarioConfig& config, RandomStream& rng,
                       GroupAssignment* groups = nullptr);
Scenario generate_ncmm(const ScenarioConfig& config, RandomStream& rng,
                       GroupAssignment* groups = nullptr);

// Dispatches on config.model.
Scenario generate(const ScenarioConfig& config, RandomStream& rng);
// Same, with a fresh stream seeded from config.seed.
Scenario generate(const ScenarioConfig& config);

}  // namespace mobilab
