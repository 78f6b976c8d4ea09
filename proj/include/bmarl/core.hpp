#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace bmarl {

// Global system state. The feature vector is the full description of the
// environment: it is sufficient to render every agent's observation and to
// compute rewards. Encodings are flat float vectors (positions normalized,
// cell contents as integer codes cast to float) so one network stack serves
// all environments.
struct EnvState {
    std::vector<float> features;
    int step_index = 0;

    bool operator==(const EnvState&) const = default;
};

// Per-agent partial observation, a pure function of the state.
struct Observation {
    std::vector<float> features;
    int agent_id = 0;

    bool operator==(const Observation&) const = default;
};

// One discrete action index per agent.
struct JointAction {
    std::vector<int> actions;
};

// Outcome of one environment step. The reward is joint and shared by all
// agents (cooperative setting). `terminated` means a true terminal state
// (no bootstrapping); `truncated` means the episode hit its step cap and
// TD targets may still bootstrap through it.
struct StepResult {
    EnvState next_state;
    std::vector<Observation> next_observations;
    double reward = 0.0;
    bool terminated = false;
    bool truncated = false;

    bool done() const { return terminated || truncated; }
};

struct ResetResult {
    EnvState state;
    std::vector<Observation> observations;
};

struct DiscountedReturn {
    double value = 0.0;
    double gamma = 1.0;
};

template <typename Rewards>
DiscountedReturn discounted_return(const Rewards& rewards, double gamma) {
    DiscountedReturn g{0.0, gamma};
    double scale = 1.0;
    for (double r : rewards) {
        g.value += scale * r;
        scale *= gamma;
    }
    return g;
}

// Dec-POMDP environment interface. An instance is a self-contained,
// deterministic state machine: all randomness (placements, reward
// locations) is a pure function of the seed passed to reset(), and
// identical (state, joint action) pairs produce identical transitions.
// Instances are independent; a single instance must be driven by one
// logical thread at a time.
class Environment {
public:
    virtual ~Environment() = default;

    virtual std::string name() const = 0;
    virtual int n_agents() const = 0;
    virtual int n_actions() const = 0;
    virtual int obs_dim() const = 0;
    virtual int state_dim() const = 0;
    virtual int max_steps() const = 0;

    // True when every agent receives the same observation vector, in which
    // case a single belief model can be shared across agents.
    virtual bool shared_observations() const = 0;

    // The part of the state the agents cannot (always) observe; this is the
    // prediction target of the belief model. Fixed dimension per environment.
    virtual int belief_target_dim() const = 0;
    virtual std::vector<float> belief_target(const EnvState& state) const = 0;

    virtual ResetResult reset(uint64_t seed) = 0;
    virtual std::vector<Observation> observe(const EnvState& state) const = 0;
    virtual StepResult step(const JointAction& action) = 0;

    // Canonical serialized configuration, hashed into dataset files and
    // checkpoints to detect mismatched artifacts.
    virtual std::string config_string() const = 0;

    const EnvState& current_state() const { return state_; }
    bool episode_finished() const { return finished_; }

protected:
    void check_action(const JointAction& a) const {
        if (finished_) {
            throw std::logic_error(name() + ": step() called on a finished episode");
        }
        if (static_cast<int>(a.actions.size()) != n_agents()) {
            throw std::invalid_argument(name() + ": joint action has wrong arity");
        }
        for (int ai : a.actions) {
            if (ai < 0 || ai >= n_actions()) {
                throw std::invalid_argument(name() + ": action index out of range");
            }
        }
    }

    EnvState state_;
    bool finished_ = true;
};

}  // namespace bmarl
