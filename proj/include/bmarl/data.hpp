#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "bmarl/core.hpp"
#include "bmarl/rng.hpp"

namespace bmarl {

// One state-annotated rollout, collected during the pre-training phase when
// agents still have access to the true state.
struct LabeledEpisode {
    uint64_t seed = 0;
    std::vector<std::vector<float>> states;            // [t][state_dim], T+1 entries
    std::vector<std::vector<std::vector<float>>> obs;  // [agent][t][obs_dim], T+1 entries
    std::vector<std::vector<int>> actions;             // [agent][t], T entries
    std::vector<float> rewards;                        // T entries
    bool terminated = false;

    int length() const { return static_cast<int>(rewards.size()); }
    bool operator==(const LabeledEpisode&) const = default;
};

struct LabeledDataset {
    std::string env_name;
    std::string config_digest;
    int n_agents = 0;
    int obs_dim = 0;
    int state_dim = 0;
    int n_actions = 0;
    std::vector<LabeledEpisode> episodes;

    bool operator==(const LabeledDataset&) const = default;
};

// Uniform-random rollouts with full state labels attached to every step.
LabeledDataset collect_random(Environment& env, int n_episodes, uint64_t seed);

// Container file: human-readable header (schema version, environment name,
// config digest, dimensions) followed by length-delimited little-endian
// binary records. Round-trips are bit-exact.
void save_dataset(const LabeledDataset& dataset, const std::string& path);
LabeledDataset load_dataset(const std::string& path);

// Throws when the dataset was collected from a different environment
// configuration than `env`.
void require_compatible(const LabeledDataset& dataset, const Environment& env);

// Stage-2 episode record. Holds local observation/action streams and the
// shared reward signal; there is deliberately no state field, so RL-phase
// code cannot read state labels even by accident.
struct RolloutEpisode {
    uint64_t uid = 0;
    std::vector<std::vector<std::vector<float>>> obs;  // [agent][t][dim], T+1 entries
    std::vector<std::vector<int>> actions;             // [agent][t], T entries
    std::vector<float> rewards;                        // T entries
    bool terminated = false;
    // Optional frozen-history-encoder hidden states ([agent][t][hidden],
    // float32), cached at rollout time so updates skip the GRU re-encode.
    std::vector<std::vector<std::vector<float>>> enc_cache;

    int length() const { return static_cast<int>(rewards.size()); }
};

// Episode ring buffer with FIFO eviction and uniform sampling, either of
// whole episodes or of individual transitions.
class ReplayBuffer {
public:
    explicit ReplayBuffer(size_t capacity);

    void push(RolloutEpisode episode);
    size_t size() const { return episodes_.size(); }
    size_t capacity() const { return capacity_; }
    size_t total_transitions() const { return total_transitions_; }
    double mean_episode_length() const;

    const RolloutEpisode& episode(size_t idx) const { return episodes_.at(idx); }

    struct TransitionIdx {
        size_t episode;
        int t;
    };

    std::vector<size_t> sample_episodes(size_t batch, Rng& rng) const;
    std::vector<TransitionIdx> sample_transitions(size_t batch, Rng& rng) const;

private:
    size_t capacity_;
    std::deque<RolloutEpisode> episodes_;
    size_t total_transitions_ = 0;
};

// Agent-local window onto the replay buffer. Stage-2 learners receive one
// of these instead of the buffer itself: it exposes exactly the data agent
// `agent` is allowed to see (own observations and actions, the shared
// reward, termination flags) and nothing else.
class AgentReplayView {
public:
    AgentReplayView(const ReplayBuffer& buffer, int agent)
        : buffer_(&buffer), agent_(agent) {}

    int agent() const { return agent_; }
    size_t size() const { return buffer_->size(); }
    size_t total_transitions() const { return buffer_->total_transitions(); }
    double mean_episode_length() const { return buffer_->mean_episode_length(); }

    int episode_length(size_t ep) const { return buffer_->episode(ep).length(); }
    uint64_t episode_uid(size_t ep) const { return buffer_->episode(ep).uid; }
    const std::vector<float>& obs(size_t ep, int t) const {
        return buffer_->episode(ep).obs[agent_][t];
    }
    int action(size_t ep, int t) const { return buffer_->episode(ep).actions[agent_][t]; }
    float reward(size_t ep, int t) const { return buffer_->episode(ep).rewards[t]; }
    bool terminal_transition(size_t ep, int t) const {
        const auto& e = buffer_->episode(ep);
        return e.terminated && t == e.length() - 1;
    }
    // Cached hidden state after consuming obs(ep, t), if the rollout stored one.
    const std::vector<float>* enc_hidden(size_t ep, int t) const {
        const auto& e = buffer_->episode(ep);
        if (e.enc_cache.empty() || e.enc_cache[agent_].empty()) return nullptr;
        return &e.enc_cache[agent_][t];
    }

    std::vector<size_t> sample_episodes(size_t batch, Rng& rng) const {
        return buffer_->sample_episodes(batch, rng);
    }
    std::vector<ReplayBuffer::TransitionIdx> sample_transitions(size_t batch, Rng& rng) const {
        return buffer_->sample_transitions(batch, rng);
    }

private:
    const ReplayBuffer* buffer_;
    int agent_;
};

}  // namespace bmarl
