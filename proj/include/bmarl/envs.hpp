#pragma once

#include <memory>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "bmarl/core.hpp"

namespace bmarl {

// Scenario 1: agents seek a treasure hidden in one of three grid corners;
// the fourth corner hosts an oracle that reveals the correct corner for
// reveal_duration steps when an agent stands on it.
struct OracleConfig {
    int grid_size = 7;
    int n_agents = 2;
    double step_penalty = 0.01;
    double treasure_reward = 1.0;
    int reveal_duration = 1;
    bool random_start = false;  // paper text says random, figure caption says centre
    int max_steps = 40;
};

// Scenario 2: collect equally valuable treasures; the team observes the
// union of all agents' visibility disks, everything else is masked.
struct GatheringConfig {
    int grid_size = 10;
    int n_agents = 2;
    int n_treasures = 4;
    int visibility_radius = 2;
    double step_penalty = 0.01;
    double treasure_reward = 1.0;
    int max_steps = 100;
};

// Scenario 3: collect all keys, then unlock the exit. Explored area stays
// revealed for the rest of the episode; collisions bounce and cost reward.
struct EscapeConfig {
    int grid_size = 10;
    int n_agents = 2;
    int n_keys = 3;
    int visibility_radius = 2;
    double step_penalty = 0.01;
    double collision_penalty = 0.1;
    double exit_reward = 1.0;
    int max_steps = 100;
};

// Scenario 4: hexagonal field with reward fields at the six corners, two of
// which pay more; only n_informed agents observe which ones.
struct HoneycombConfig {
    int radius = 5;
    int n_agents = 10;
    int n_informed = 2;
    int n_high_fields = 2;
    double base_reward = 1.0;
    double high_reward = 2.0;
    double group_bonus_factor = 1.5;
    int max_steps = 25;
};

std::unique_ptr<Environment> make_oracle(const OracleConfig& config);
std::unique_ptr<Environment> make_gathering(const GatheringConfig& config);
std::unique_ptr<Environment> make_escape(const EscapeConfig& config);
std::unique_ptr<Environment> make_honeycomb(const HoneycombConfig& config);

// Registry used by configs and the CLI: environment name in
// {"oracle", "gathering", "escape", "honeycomb"} plus a JSON section with
// that environment's fields. Unknown keys are rejected.
std::unique_ptr<Environment> make_env(const std::string& name, const nlohmann::json& config);
std::unique_ptr<Environment> make_env(const nlohmann::json& env_section);  // {"name": ..., ...}

// Canonical JSON (defaults filled in, keys validated) for an env section.
nlohmann::json canonical_env_config(const nlohmann::json& env_section);

// Observation mask / sentinel codes shared by the grid environments.
inline constexpr float kUnseenCell = -1.0f;
inline constexpr float kUnknownCoord = -1.0f;
inline constexpr float kHiddenHexCoord = -2.0f;

}  // namespace bmarl
