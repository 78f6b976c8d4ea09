#include <algorithm>
#include <cmath>
#include <sstream>

#include "bmarl/envs.hpp"
#include "bmarl/rng.hpp"

namespace bmarl {
namespace {

// Axial hex directions, followed by the void action at index 6.
constexpr int kHexMoves[6][2] = {{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}};

class HoneycombEnv final : public Environment {
public:
    explicit HoneycombEnv(const HoneycombConfig& cfg) : cfg_(cfg) {
        if (cfg_.radius < 1) throw std::invalid_argument("honeycomb: radius must be >= 1");
        if (cfg_.n_agents < 1) throw std::invalid_argument("honeycomb: n_agents must be >= 1");
        if (cfg_.n_informed < 0 || cfg_.n_informed > cfg_.n_agents) {
            throw std::invalid_argument("honeycomb: n_informed must be in [0, n_agents]");
        }
        if (cfg_.n_high_fields < 1 || cfg_.n_high_fields > 6) {
            throw std::invalid_argument("honeycomb: n_high_fields must be in [1, 6]");
        }
        if (cfg_.high_reward <= cfg_.base_reward) {
            throw std::invalid_argument("honeycomb: high_reward must exceed base_reward");
        }
        if (cfg_.group_bonus_factor <= 1.0) {
            throw std::invalid_argument("honeycomb: group_bonus_factor must exceed 1");
        }
        const int r = cfg_.radius;
        corners_ = {{r, 0}, {0, r}, {-r, r}, {-r, 0}, {0, -r}, {r, -r}};
    }

    std::string name() const override { return "honeycomb"; }
    int n_agents() const override { return cfg_.n_agents; }
    int n_actions() const override { return 7; }
    // [all agent coords, six corner coords, high-field coords or sentinel]
    int obs_dim() const override { return 2 * cfg_.n_agents + 12 + 2 * cfg_.n_high_fields; }
    int state_dim() const override { return 2 * cfg_.n_agents + 2 * cfg_.n_high_fields; }
    int max_steps() const override { return cfg_.max_steps; }
    bool shared_observations() const override { return false; }
    int belief_target_dim() const override { return 2 * cfg_.n_high_fields; }

    std::vector<float> belief_target(const EnvState& s) const override {
        return {s.features.begin() + 2 * cfg_.n_agents, s.features.end()};
    }

    ResetResult reset(uint64_t seed) override {
        Rng rng(seed_mix(seed, fnv1a64("honeycomb")));
        positions_.assign(cfg_.n_agents, {0, 0});
        absorbed_.assign(cfg_.n_agents, 0);
        high_.clear();
        while (static_cast<int>(high_.size()) < cfg_.n_high_fields) {
            const int c = static_cast<int>(rng.uniform_int(6));
            if (std::find(high_.begin(), high_.end(), c) == high_.end()) high_.push_back(c);
        }
        std::sort(high_.begin(), high_.end());
        steps_ = 0;
        finished_ = false;
        sync_state();
        return {state_, observe(state_)};
    }

    std::vector<Observation> observe(const EnvState& s) const override {
        const int n = cfg_.n_agents;
        const float d = static_cast<float>(cfg_.radius);
        std::vector<float> base(obs_dim(), 0.0f);
        for (int i = 0; i < 2 * n; ++i) base[i] = s.features[i];
        for (int c = 0; c < 6; ++c) {
            base[2 * n + 2 * c] = corners_[c].first / d;
            base[2 * n + 2 * c + 1] = corners_[c].second / d;
        }
        std::vector<Observation> all(n);
        for (int i = 0; i < n; ++i) {
            std::vector<float> obs = base;
            for (int k = 0; k < 2 * cfg_.n_high_fields; ++k) {
                obs[2 * n + 12 + k] =
                    i < cfg_.n_informed ? s.features[2 * n + k] : kHiddenHexCoord;
            }
            all[i] = {std::move(obs), i};
        }
        return all;
    }

    StepResult step(const JointAction& action) override {
        check_action(action);
        const int n = cfg_.n_agents;
        std::vector<int> was_on_field(n, -1);
        for (int i = 0; i < n; ++i) was_on_field[i] = field_at(positions_[i]);
        for (int i = 0; i < n; ++i) {
            if (absorbed_[i]) continue;  // reward fields are absorbing
            const int a = action.actions[i];
            if (a == 6) continue;
            const int q = positions_[i].first + kHexMoves[a][0];
            const int r = positions_[i].second + kHexMoves[a][1];
            if (in_bounds(q, r)) positions_[i] = {q, r};
        }
        StepResult res;
        // An agent arriving at a reward field collects once, scaled by the
        // number of agents occupying that field after the move.
        for (int i = 0; i < n; ++i) {
            const int f = field_at(positions_[i]);
            if (f < 0 || was_on_field[i] >= 0) continue;
            int k = 0;
            for (int j = 0; j < n; ++j) {
                if (field_at(positions_[j]) == f) ++k;
            }
            const bool is_high = std::find(high_.begin(), high_.end(), f) != high_.end();
            const double field_reward = is_high ? cfg_.high_reward : cfg_.base_reward;
            res.reward += field_reward * std::pow(cfg_.group_bonus_factor, k - 1);
            absorbed_[i] = 1;
        }
        const bool all_absorbed =
            std::all_of(absorbed_.begin(), absorbed_.end(), [](int a) { return a != 0; });
        res.terminated = all_absorbed;
        ++steps_;
        if (!res.terminated && steps_ >= cfg_.max_steps) res.truncated = true;
        finished_ = res.terminated || res.truncated;
        sync_state();
        res.next_state = state_;
        res.next_observations = observe(state_);
        return res;
    }

    std::string config_string() const override {
        std::ostringstream os;
        os << "honeycomb radius=" << cfg_.radius << " n_agents=" << cfg_.n_agents
           << " n_informed=" << cfg_.n_informed << " n_high_fields=" << cfg_.n_high_fields
           << " base_reward=" << cfg_.base_reward << " high_reward=" << cfg_.high_reward
           << " group_bonus_factor=" << cfg_.group_bonus_factor << " max_steps=" << cfg_.max_steps;
        return os.str();
    }

private:
    bool in_bounds(int q, int r) const {
        return std::abs(q) <= cfg_.radius && std::abs(r) <= cfg_.radius &&
               std::abs(q + r) <= cfg_.radius;
    }

    int field_at(const std::pair<int, int>& p) const {
        for (int c = 0; c < 6; ++c) {
            if (corners_[c] == p) return c;
        }
        return -1;
    }

    void sync_state() {
        const float d = static_cast<float>(cfg_.radius);
        state_.features.assign(state_dim(), 0.0f);
        for (int i = 0; i < cfg_.n_agents; ++i) {
            state_.features[2 * i] = positions_[i].first / d;
            state_.features[2 * i + 1] = positions_[i].second / d;
        }
        for (int k = 0; k < cfg_.n_high_fields; ++k) {
            state_.features[2 * cfg_.n_agents + 2 * k] = corners_[high_[k]].first / d;
            state_.features[2 * cfg_.n_agents + 2 * k + 1] = corners_[high_[k]].second / d;
        }
        state_.step_index = steps_;
    }

    HoneycombConfig cfg_;
    std::vector<std::pair<int, int>> corners_;
    std::vector<std::pair<int, int>> positions_;
    std::vector<int> absorbed_;
    std::vector<int> high_;
    int steps_ = 0;
};

}  // namespace

std::unique_ptr<Environment> make_honeycomb(const HoneycombConfig& config) {
    return std::make_unique<HoneycombEnv>(config);
}

}  // namespace bmarl
