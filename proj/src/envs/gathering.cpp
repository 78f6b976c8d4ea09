#include <algorithm>
#include <sstream>

#include "bmarl/envs.hpp"
#include "bmarl/rng.hpp"

namespace bmarl {
namespace {

constexpr int kMoves4[4][2] = {{0, 1}, {1, 0}, {0, -1}, {-1, 0}};  // N, E, S, W

// Draws k distinct cell indices out of n_cells.
std::vector<int> distinct_cells(Rng& rng, int n_cells, int k) {
    std::vector<int> cells;
    cells.reserve(k);
    while (static_cast<int>(cells.size()) < k) {
        const int c = static_cast<int>(rng.uniform_int(n_cells));
        if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
    }
    return cells;
}

// Cell codes in observations: 0 empty, 1 treasure, 2+i agent i, -1 masked.
class GatheringEnv final : public Environment {
public:
    explicit GatheringEnv(const GatheringConfig& cfg) : cfg_(cfg) {
        if (cfg_.grid_size < 2) throw std::invalid_argument("gathering: grid_size must be >= 2");
        if (cfg_.n_treasures < 1) throw std::invalid_argument("gathering: n_treasures must be >= 1");
        if (cfg_.visibility_radius < 1) throw std::invalid_argument("gathering: visibility_radius must be >= 1");
        if (cfg_.n_agents + cfg_.n_treasures > n_cells()) {
            throw std::invalid_argument("gathering: grid does not fit agents and treasures");
        }
    }

    std::string name() const override { return "gathering"; }
    int n_agents() const override { return cfg_.n_agents; }
    int n_actions() const override { return 5; }
    int obs_dim() const override { return n_cells(); }
    int state_dim() const override { return 2 * cfg_.n_agents + n_cells(); }
    int max_steps() const override { return cfg_.max_steps; }
    bool shared_observations() const override { return true; }
    int belief_target_dim() const override { return n_cells(); }

    std::vector<float> belief_target(const EnvState& s) const override {
        return {s.features.begin() + 2 * cfg_.n_agents, s.features.end()};
    }

    ResetResult reset(uint64_t seed) override {
        Rng rng(seed_mix(seed, fnv1a64("gathering")));
        const auto cells = distinct_cells(rng, n_cells(), cfg_.n_agents + cfg_.n_treasures);
        positions_.resize(cfg_.n_agents);
        for (int i = 0; i < cfg_.n_agents; ++i) {
            positions_[i] = {cells[i] % cfg_.grid_size, cells[i] / cfg_.grid_size};
        }
        treasure_.assign(n_cells(), 0);
        for (int k = 0; k < cfg_.n_treasures; ++k) treasure_[cells[cfg_.n_agents + k]] = 1;
        steps_ = 0;
        finished_ = false;
        sync_state();
        return {state_, observe(state_)};
    }

    std::vector<Observation> observe(const EnvState& s) const override {
        const int n = cfg_.n_agents;
        std::vector<std::pair<int, int>> pos(n);
        for (int i = 0; i < n; ++i) {
            pos[i] = {static_cast<int>(s.features[2 * i]), static_cast<int>(s.features[2 * i + 1])};
        }
        std::vector<float> grid(n_cells());
        for (int c = 0; c < n_cells(); ++c) {
            const int x = c % cfg_.grid_size, y = c / cfg_.grid_size;
            bool visible = false;
            for (const auto& p : pos) {
                if (std::max(std::abs(p.first - x), std::abs(p.second - y)) <= cfg_.visibility_radius) {
                    visible = true;
                    break;
                }
            }
            if (!visible) {
                grid[c] = kUnseenCell;
                continue;
            }
            float code = s.features[2 * n + c] > 0.0f ? 1.0f : 0.0f;
            for (int i = 0; i < n; ++i) {
                if (pos[i].first == x && pos[i].second == y) {
                    code = static_cast<float>(2 + i);
                    break;
                }
            }
            grid[c] = code;
        }
        std::vector<Observation> all(n);
        for (int i = 0; i < n; ++i) all[i] = {grid, i};
        return all;
    }

    StepResult step(const JointAction& action) override {
        check_action(action);
        for (int i = 0; i < cfg_.n_agents; ++i) {
            const int a = action.actions[i];
            if (a == 4) continue;  // void
            auto& p = positions_[i];
            p.first = std::clamp(p.first + kMoves4[a][0], 0, cfg_.grid_size - 1);
            p.second = std::clamp(p.second + kMoves4[a][1], 0, cfg_.grid_size - 1);
        }
        StepResult r;
        r.reward = -cfg_.step_penalty;
        for (const auto& p : positions_) {
            const int c = p.second * cfg_.grid_size + p.first;
            if (treasure_[c]) {
                treasure_[c] = 0;
                r.reward += cfg_.treasure_reward;
            }
        }
        const bool all_collected =
            std::none_of(treasure_.begin(), treasure_.end(), [](int t) { return t != 0; });
        r.terminated = all_collected;
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
        os << "gathering grid_size=" << cfg_.grid_size << " n_agents=" << cfg_.n_agents
           << " n_treasures=" << cfg_.n_treasures << " visibility_radius=" << cfg_.visibility_radius
           << " step_penalty=" << cfg_.step_penalty << " treasure_reward=" << cfg_.treasure_reward
           << " max_steps=" << cfg_.max_steps;
        return os.str();
    }

private:
    int n_cells() const { return cfg_.grid_size * cfg_.grid_size; }

    void sync_state() {
        state_.features.assign(state_dim(), 0.0f);
        for (int i = 0; i < cfg_.n_agents; ++i) {
            state_.features[2 * i] = static_cast<float>(positions_[i].first);
            state_.features[2 * i + 1] = static_cast<float>(positions_[i].second);
        }
        for (int c = 0; c < n_cells(); ++c) {
            state_.features[2 * cfg_.n_agents + c] = static_cast<float>(treasure_[c]);
        }
        state_.step_index = steps_;
    }

    GatheringConfig cfg_;
    std::vector<std::pair<int, int>> positions_;
    std::vector<int> treasure_;
    int steps_ = 0;
};

}  // namespace

std::unique_ptr<Environment> make_gathering(const GatheringConfig& config) {
    return std::make_unique<GatheringEnv>(config);
}

}  // namespace bmarl
