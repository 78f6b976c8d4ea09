#include <set>

#include <nlohmann/json.hpp>

#include "bmarl/envs.hpp"

namespace bmarl {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& section, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : section.items()) {
        if (!known.contains(key)) {
            throw std::invalid_argument("unknown key '" + key + "' in " + where + " config");
        }
    }
}

template <typename T>
void read(const json& section, const char* key, T& out) {
    if (section.contains(key)) out = section.at(key).get<T>();
}

json oracle_json(const OracleConfig& c) {
    return {{"name", "oracle"},
            {"grid_size", c.grid_size},
            {"n_agents", c.n_agents},
            {"step_penalty", c.step_penalty},
            {"treasure_reward", c.treasure_reward},
            {"reveal_duration", c.reveal_duration},
            {"random_start", c.random_start},
            {"max_steps", c.max_steps}};
}

json gathering_json(const GatheringConfig& c) {
    return {{"name", "gathering"},
            {"grid_size", c.grid_size},
            {"n_agents", c.n_agents},
            {"n_treasures", c.n_treasures},
            {"visibility_radius", c.visibility_radius},
            {"step_penalty", c.step_penalty},
            {"treasure_reward", c.treasure_reward},
            {"max_steps", c.max_steps}};
}

json escape_json(const EscapeConfig& c) {
    return {{"name", "escape"},
            {"grid_size", c.grid_size},
            {"n_agents", c.n_agents},
            {"n_keys", c.n_keys},
            {"visibility_radius", c.visibility_radius},
            {"step_penalty", c.step_penalty},
            {"collision_penalty", c.collision_penalty},
            {"exit_reward", c.exit_reward},
            {"max_steps", c.max_steps}};
}

json honeycomb_json(const HoneycombConfig& c) {
    return {{"name", "honeycomb"},
            {"radius", c.radius},
            {"n_agents", c.n_agents},
            {"n_informed", c.n_informed},
            {"n_high_fields", c.n_high_fields},
            {"base_reward", c.base_reward},
            {"high_reward", c.high_reward},
            {"group_bonus_factor", c.group_bonus_factor},
            {"max_steps", c.max_steps}};
}

OracleConfig parse_oracle(const json& s) {
    reject_unknown_keys(s, {"name", "grid_size", "n_agents", "step_penalty", "treasure_reward",
                            "reveal_duration", "random_start", "max_steps"},
                        "oracle");
    OracleConfig c;
    read(s, "grid_size", c.grid_size);
    read(s, "n_agents", c.n_agents);
    read(s, "step_penalty", c.step_penalty);
    read(s, "treasure_reward", c.treasure_reward);
    read(s, "reveal_duration", c.reveal_duration);
    read(s, "random_start", c.random_start);
    read(s, "max_steps", c.max_steps);
    return c;
}

GatheringConfig parse_gathering(const json& s) {
    reject_unknown_keys(s, {"name", "grid_size", "n_agents", "n_treasures", "visibility_radius",
                            "step_penalty", "treasure_reward", "max_steps"},
                        "gathering");
    GatheringConfig c;
    read(s, "grid_size", c.grid_size);
    read(s, "n_agents", c.n_agents);
    read(s, "n_treasures", c.n_treasures);
    read(s, "visibility_radius", c.visibility_radius);
    read(s, "step_penalty", c.step_penalty);
    read(s, "treasure_reward", c.treasure_reward);
    read(s, "max_steps", c.max_steps);
    return c;
}

EscapeConfig parse_escape(const json& s) {
    reject_unknown_keys(s, {"name", "grid_size", "n_agents", "n_keys", "visibility_radius",
                            "step_penalty", "collision_penalty", "exit_reward", "max_steps"},
                        "escape");
    EscapeConfig c;
    read(s, "grid_size", c.grid_size);
    read(s, "n_agents", c.n_agents);
    read(s, "n_keys", c.n_keys);
    read(s, "visibility_radius", c.visibility_radius);
    read(s, "step_penalty", c.step_penalty);
    read(s, "collision_penalty", c.collision_penalty);
    read(s, "exit_reward", c.exit_reward);
    read(s, "max_steps", c.max_steps);
    return c;
}

HoneycombConfig parse_honeycomb(const json& s) {
    reject_unknown_keys(s, {"name", "radius", "n_agents", "n_informed", "n_high_fields",
                            "base_reward", "high_reward", "group_bonus_factor", "max_steps"},
                        "honeycomb");
    HoneycombConfig c;
    read(s, "radius", c.radius);
    read(s, "n_agents", c.n_agents);
    read(s, "n_informed", c.n_informed);
    read(s, "n_high_fields", c.n_high_fields);
    read(s, "base_reward", c.base_reward);
    read(s, "high_reward", c.high_reward);
    read(s, "group_bonus_factor", c.group_bonus_factor);
    read(s, "max_steps", c.max_steps);
    return c;
}

}  // namespace

std::unique_ptr<Environment> make_env(const std::string& name, const nlohmann::json& config) {
    json section = config.is_null() ? json::object() : config;
    section["name"] = name;
    return make_env(section);
}

std::unique_ptr<Environment> make_env(const nlohmann::json& env_section) {
    if (!env_section.contains("name")) {
        throw std::invalid_argument("environment config is missing 'name'");
    }
    const std::string name = env_section.at("name").get<std::string>();
    if (name == "oracle") return make_oracle(parse_oracle(env_section));
    if (name == "gathering") return make_gathering(parse_gathering(env_section));
    if (name == "escape") return make_escape(parse_escape(env_section));
    if (name == "honeycomb") return make_honeycomb(parse_honeycomb(env_section));
    throw std::invalid_argument("unknown environment '" + name + "'");
}

nlohmann::json canonical_env_config(const nlohmann::json& env_section) {
    const std::string name = env_section.at("name").get<std::string>();
    if (name == "oracle") return oracle_json(parse_oracle(env_section));
    if (name == "gathering") return gathering_json(parse_gathering(env_section));
    if (name == "escape") return escape_json(parse_escape(env_section));
    if (name == "honeycomb") return honeycomb_json(parse_honeycomb(env_section));
    throw std::invalid_argument("unknown environment '" + name + "'");
}

}  // namespace bmarl
