#include <algorithm>
#include <sstream>

#include "bmarl/envs.hpp"
#include "bmarl/rng.hpp"

namespace bmarl {
namespace {

// 8 compass moves (N, NE, E, SE, S, SW, W, NW) followed by the void action.
constexpr int kMoves[8][2] = {{0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}};

class OracleEnv final : public Environment {
public:
    explicit OracleEnv(const OracleConfig& cfg) : cfg_(cfg) {
        if (cfg_.grid_size < 4) throw std::invalid_argument("oracle: grid_size must be >= 4");
        if (cfg_.n_agents < 1) throw std::invalid_argument("oracle: n_agents must be >= 1");
        if (cfg_.reveal_duration < 1) throw std::invalid_argument("oracle: reveal_duration must be >= 1");
        if (cfg_.max_steps < 1) throw std::invalid_argument("oracle: max_steps must be >= 1");
        const int g = cfg_.grid_size - 1;
        treasures_ = {{0, 0}, {g, 0}, {0, g}};
        oracle_ = {g, g};
    }

    std::string name() const override { return "oracle"; }
    int n_agents() const override { return cfg_.n_agents; }
    int n_actions() const override { return 9; }
    int obs_dim() const override { return 2 * cfg_.n_agents + 2; }
    // [agent coords..., correct treasure coords, reveal timer]
    int state_dim() const override { return 2 * cfg_.n_agents + 3; }
    int max_steps() const override { return cfg_.max_steps; }
    bool shared_observations() const override { return true; }
    int belief_target_dim() const override { return 2; }

    std::vector<float> belief_target(const EnvState& s) const override {
        return {s.features[2 * cfg_.n_agents], s.features[2 * cfg_.n_agents + 1]};
    }

    ResetResult reset(uint64_t seed) override {
        Rng rng(seed_mix(seed, fnv1a64("oracle")));
        const int g = cfg_.grid_size;
        positions_.assign(cfg_.n_agents, {g / 2, g / 2});
        if (cfg_.random_start) {
            for (auto& p : positions_) {
                p = {static_cast<int>(rng.uniform_int(g)), static_cast<int>(rng.uniform_int(g))};
            }
        }
        correct_ = static_cast<int>(rng.uniform_int(treasures_.size()));
        reveal_timer_ = 0;
        steps_ = 0;
        finished_ = false;
        sync_state();
        return {state_, observe(state_)};
    }

    std::vector<Observation> observe(const EnvState& s) const override {
        const int n = cfg_.n_agents;
        std::vector<float> obs(obs_dim());
        for (int i = 0; i < 2 * n; ++i) obs[i] = s.features[i];
        const bool revealed = s.features[2 * n + 2] > 0.0f;
        obs[2 * n] = revealed ? s.features[2 * n] : kUnknownCoord;
        obs[2 * n + 1] = revealed ? s.features[2 * n + 1] : kUnknownCoord;
        std::vector<Observation> all(n);
        for (int i = 0; i < n; ++i) all[i] = {obs, i};
        return all;
    }

    StepResult step(const JointAction& action) override {
        check_action(action);
        for (int i = 0; i < cfg_.n_agents; ++i) {
            const int a = action.actions[i];
            if (a == 8) continue;  // void
            auto& p = positions_[i];
            p.first = std::clamp(p.first + kMoves[a][0], 0, cfg_.grid_size - 1);
            p.second = std::clamp(p.second + kMoves[a][1], 0, cfg_.grid_size - 1);
        }
        bool on_oracle = false, on_treasure = false;
        for (const auto& p : positions_) {
            if (p == oracle_) on_oracle = true;
            if (p == treasures_[correct_]) on_treasure = true;
        }
        reveal_timer_ = on_oracle ? cfg_.reveal_duration : std::max(0, reveal_timer_ - 1);

        StepResult r;
        r.reward = -cfg_.step_penalty;
        if (on_treasure) {
            r.reward += cfg_.treasure_reward;
            r.terminated = true;
        }
        ++steps_;
        if (!r.terminated && steps_ >= cfg_.max_steps) r.truncated = true;
        finished_ = r.terminated || r.truncated;
        sync_state();
        r.next_state = state_;
        r.next_observations = observe(state_);
        return r;
    }

    std::string config_string() const override {
        std::ostringstream os;
        os << "oracle grid_size=" << cfg_.grid_size << " n_agents=" << cfg_.n_agents
           << " step_penalty=" << cfg_.step_penalty << " treasure_reward=" << cfg_.treasure_reward
           << " reveal_duration=" << cfg_.reveal_duration << " random_start=" << cfg_.random_start
           << " max_steps=" << cfg_.max_steps;
        return os.str();
    }

private:
    void sync_state() {
        const float d = static_cast<float>(cfg_.grid_size - 1);
        state_.features.assign(state_dim(), 0.0f);
        for (int i = 0; i < cfg_.n_agents; ++i) {
            state_.features[2 * i] = positions_[i].first / d;
            state_.features[2 * i + 1] = positions_[i].second / d;
        }
        state_.features[2 * cfg_.n_agents] = treasures_[correct_].first / d;
        state_.features[2 * cfg_.n_agents + 1] = treasures_[correct_].second / d;
        state_.features[2 * cfg_.n_agents + 2] = static_cast<float>(reveal_timer_);
        state_.step_index = steps_;
    }

    OracleConfig cfg_;
    std::vector<std::pair<int, int>> treasures_;
    std::pair<int, int> oracle_;
    std::vector<std::pair<int, int>> positions_;
    int correct_ = 0;
    int reveal_timer_ = 0;
    int steps_ = 0;
};

}  // namespace

std::unique_ptr<Environment> make_oracle(const OracleConfig& config) {
    return std::make_unique<OracleEnv>(config);
}

}  // namespace bmarl
