#include <algorithm>
#include <sstream>

#include "bmarl/envs.hpp"
#include "bmarl/rng.hpp"

namespace bmarl {
namespace {

constexpr int kMoves4[4][2] = {{0, 1}, {1, 0}, {0, -1}, {-1, 0}};  // N, E, S, W

std::vector<int> distinct_cells(Rng& rng, int n_cells, int k) {
    std::vector<int> cells;
    cells.reserve(k);
    while (static_cast<int>(cells.size()) < k) {
        const int c = static_cast<int>(rng.uniform_int(n_cells));
        if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
    }
    return cells;
}

// Cell contents: 0 empty, 1 key, 2 exit. Observation codes add 3+i for
// agent i and -1 for cells the team has never seen.
class EscapeEnv final : public Environment {
public:
    explicit EscapeEnv(const EscapeConfig& cfg) : cfg_(cfg) {
        if (cfg_.grid_size < 2) throw std::invalid_argument("escape: grid_size must be >= 2");
        if (cfg_.n_keys < 1) throw std::invalid_argument("escape: n_keys must be >= 1");
        if (cfg_.visibility_radius < 1) throw std::invalid_argument("escape: visibility_radius must be >= 1");
        if (cfg_.n_agents + cfg_.n_keys + 1 > n_cells()) {
            throw std::invalid_argument("escape: grid does not fit agents, keys and exit");
        }
    }

    std::string name() const override { return "escape"; }
    int n_agents() const override { return cfg_.n_agents; }
    int n_actions() const override { return 5; }
    int obs_dim() const override { return n_cells(); }
    int state_dim() const override { return 2 * cfg_.n_agents + 2 * n_cells(); }
    int max_steps() const override { return cfg_.max_steps; }
    bool shared_observations() const override { return true; }
    int belief_target_dim() const override { return n_cells(); }

    std::vector<float> belief_target(const EnvState& s) const override {
        const int off = 2 * cfg_.n_agents;
        return {s.features.begin() + off, s.features.begin() + off + n_cells()};
    }

    ResetResult reset(uint64_t seed) override {
        Rng rng(seed_mix(seed, fnv1a64("escape")));
        const auto cells = distinct_cells(rng, n_cells(), cfg_.n_agents + cfg_.n_keys + 1);
        positions_.resize(cfg_.n_agents);
        for (int i = 0; i < cfg_.n_agents; ++i) {
            positions_[i] = {cells[i] % cfg_.grid_size, cells[i] / cfg_.grid_size};
        }
        contents_.assign(n_cells(), 0);
        for (int k = 0; k < cfg_.n_keys; ++k) contents_[cells[cfg_.n_agents + k]] = 1;
        contents_[cells[cfg_.n_agents + cfg_.n_keys]] = 2;
        revealed_.assign(n_cells(), 0);
        reveal_around_agents();
        steps_ = 0;
        finished_ = false;
        sync_state();
        return {state_, observe(state_)};
    }

    std::vector<Observation> observe(const EnvState& s) const override {
        const int n = cfg_.n_agents;
        std::vector<float> grid(n_cells());
        for (int c = 0; c < n_cells(); ++c) {
            if (s.features[2 * n + n_cells() + c] <= 0.0f) {
                grid[c] = kUnseenCell;
                continue;
            }
            float code = s.features[2 * n + c];
            for (int i = 0; i < n; ++i) {
                const int ax = static_cast<int>(s.features[2 * i]);
                const int ay = static_cast<int>(s.features[2 * i + 1]);
                if (ay * cfg_.grid_size + ax == c) {
                    code = static_cast<float>(3 + i);
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
        const int n = cfg_.n_agents;
        std::vector<std::pair<int, int>> want(n);
        for (int i = 0; i < n; ++i) {
            want[i] = positions_[i];
            const int a = action.actions[i];
            if (a == 4) continue;
            want[i].first = std::clamp(want[i].first + kMoves4[a][0], 0, cfg_.grid_size - 1);
            want[i].second = std::clamp(want[i].second + kMoves4[a][1], 0, cfg_.grid_size - 1);
        }

        int collisions = 0;
        auto final_pos = want;
        // Swap conflicts: both bounce back.
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (final_pos[i] == positions_[j] && final_pos[j] == positions_[i] &&
                    final_pos[i] != positions_[i] && final_pos[j] != positions_[j]) {
                    final_pos[i] = positions_[i];
                    final_pos[j] = positions_[j];
                    ++collisions;
                }
            }
        }
        // Same-cell conflicts (including chains caused by bounced agents):
        // every mover involved bounces back, one penalty per resolved cell.
        for (bool again = true; again;) {
            again = false;
            for (int i = 0; i < n && !again; ++i) {
                for (int j = i + 1; j < n && !again; ++j) {
                    if (final_pos[i] != final_pos[j]) continue;
                    bool bounced = false;
                    for (int k = 0; k < n; ++k) {
                        if (final_pos[k] == final_pos[i] && final_pos[k] != positions_[k]) {
                            final_pos[k] = positions_[k];
                            bounced = true;
                        }
                    }
                    if (bounced) {
                        ++collisions;
                        again = true;
                    }
                }
            }
        }
        positions_ = final_pos;
        reveal_around_agents();

        StepResult r;
        r.reward = -cfg_.step_penalty - cfg_.collision_penalty * collisions;
        for (const auto& p : positions_) {
            const int c = p.second * cfg_.grid_size + p.first;
            if (contents_[c] == 1) contents_[c] = 0;  // collect key
        }
        const bool all_keys_held =
            std::none_of(contents_.begin(), contents_.end(), [](int c) { return c == 1; });
        if (all_keys_held) {
            for (const auto& p : positions_) {
                if (contents_[p.second * cfg_.grid_size + p.first] == 2) {
                    r.reward += cfg_.exit_reward;
                    r.terminated = true;
                    break;
                }
            }
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
        os << "escape grid_size=" << cfg_.grid_size << " n_agents=" << cfg_.n_agents
           << " n_keys=" << cfg_.n_keys << " visibility_radius=" << cfg_.visibility_radius
           << " step_penalty=" << cfg_.step_penalty << " collision_penalty=" << cfg_.collision_penalty
           << " exit_reward=" << cfg_.exit_reward << " max_steps=" << cfg_.max_steps;
        return os.str();
    }

private:
    int n_cells() const { return cfg_.grid_size * cfg_.grid_size; }

    void reveal_around_agents() {
        for (const auto& p : positions_) {
            for (int y = std::max(0, p.second - cfg_.visibility_radius);
                 y <= std::min(cfg_.grid_size - 1, p.second + cfg_.visibility_radius); ++y) {
                for (int x = std::max(0, p.first - cfg_.visibility_radius);
                     x <= std::min(cfg_.grid_size - 1, p.first + cfg_.visibility_radius); ++x) {
                    revealed_[y * cfg_.grid_size + x] = 1;
                }
            }
        }
    }

    void sync_state() {
        state_.features.assign(state_dim(), 0.0f);
        for (int i = 0; i < cfg_.n_agents; ++i) {
            state_.features[2 * i] = static_cast<float>(positions_[i].first);
            state_.features[2 * i + 1] = static_cast<float>(positions_[i].second);
        }
        for (int c = 0; c < n_cells(); ++c) {
            state_.features[2 * cfg_.n_agents + c] = static_cast<float>(contents_[c]);
            state_.features[2 * cfg_.n_agents + n_cells() + c] = static_cast<float>(revealed_[c]);
        }
        state_.step_index = steps_;
    }

    EscapeConfig cfg_;
    std::vector<std::pair<int, int>> positions_;
    std::vector<int> contents_;
    std::vector<int> revealed_;
    int steps_ = 0;
};

}  // namespace

std::unique_ptr<Environment> make_escape(const EscapeConfig& config) {
    return std::make_unique<EscapeEnv>(config);
}

}  // namespace bmarl
