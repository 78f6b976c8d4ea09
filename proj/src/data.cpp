#include "bmarl/data.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "bmarl/digest.hpp"

namespace bmarl {

LabeledDataset collect_random(Environment& env, int n_episodes, uint64_t seed) {
    if (n_episodes < 1) throw std::invalid_argument("collect_random: n_episodes must be >= 1");
    LabeledDataset ds;
    ds.env_name = env.name();
    ds.config_digest = content_digest(env.config_string());
    ds.n_agents = env.n_agents();
    ds.obs_dim = env.obs_dim();
    ds.state_dim = env.state_dim();
    ds.n_actions = env.n_actions();
    ds.episodes.reserve(n_episodes);

    Rng action_rng(seed_mix(seed, fnv1a64("collect")));
    for (int e = 0; e < n_episodes; ++e) {
        LabeledEpisode ep;
        ep.seed = seed_mix(seed, fnv1a64("episode"), static_cast<uint64_t>(e));
        auto [state, observations] = env.reset(ep.seed);
        ep.states.push_back(state.features);
        ep.obs.resize(env.n_agents());
        ep.actions.resize(env.n_agents());
        for (int i = 0; i < env.n_agents(); ++i) ep.obs[i].push_back(observations[i].features);
        while (!env.episode_finished()) {
            JointAction joint;
            joint.actions.resize(env.n_agents());
            for (int i = 0; i < env.n_agents(); ++i) {
                joint.actions[i] = static_cast<int>(action_rng.uniform_int(env.n_actions()));
                ep.actions[i].push_back(joint.actions[i]);
            }
            StepResult r = env.step(joint);
            ep.states.push_back(r.next_state.features);
            for (int i = 0; i < env.n_agents(); ++i) {
                ep.obs[i].push_back(r.next_observations[i].features);
            }
            ep.rewards.push_back(static_cast<float>(r.reward));
            if (r.terminated) ep.terminated = true;
        }
        ds.episodes.push_back(std::move(ep));
    }
    return ds;
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "dataset io assumes a little-endian host");

void put_u32(std::ostream& os, uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void put_u64(std::ostream& os, uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }
void put_f32s(std::ostream& os, const std::vector<float>& v) {
    put_u32(os, static_cast<uint32_t>(v.size()));
    os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * 4));
}
void put_i32s(std::ostream& os, const std::vector<int>& v) {
    put_u32(os, static_cast<uint32_t>(v.size()));
    for (int x : v) {
        const int32_t y = static_cast<int32_t>(x);
        os.write(reinterpret_cast<const char*>(&y), 4);
    }
}

uint32_t get_u32(std::istream& is) {
    uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 4);
    if (!is) throw std::runtime_error("dataset file truncated");
    return v;
}
uint64_t get_u64(std::istream& is) {
    uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 8);
    if (!is) throw std::runtime_error("dataset file truncated");
    return v;
}
std::vector<float> get_f32s(std::istream& is) {
    const uint32_t n = get_u32(is);
    std::vector<float> v(n);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n) * 4);
    if (!is) throw std::runtime_error("dataset file truncated");
    return v;
}
std::vector<int> get_i32s(std::istream& is) {
    const uint32_t n = get_u32(is);
    std::vector<int> v(n);
    for (uint32_t i = 0; i < n; ++i) {
        int32_t x = 0;
        is.read(reinterpret_cast<char*>(&x), 4);
        v[i] = x;
    }
    if (!is) throw std::runtime_error("dataset file truncated");
    return v;
}

constexpr const char* kDatasetMagic = "BMARL-DATASET v1";

}  // namespace

void save_dataset(const LabeledDataset& ds, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os << kDatasetMagic << "\n"
       << "env " << ds.env_name << "\n"
       << "config_digest " << ds.config_digest << "\n"
       << "n_agents " << ds.n_agents << "\n"
       << "obs_dim " << ds.obs_dim << "\n"
       << "state_dim " << ds.state_dim << "\n"
       << "n_actions " << ds.n_actions << "\n"
       << "episodes " << ds.episodes.size() << "\n"
       << "end_header\n";
    for (const auto& ep : ds.episodes) {
        put_u64(os, ep.seed);
        put_u32(os, static_cast<uint32_t>(ep.length()));
        os.put(ep.terminated ? 1 : 0);
        put_u32(os, static_cast<uint32_t>(ep.states.size()));
        for (const auto& s : ep.states) put_f32s(os, s);
        for (const auto& agent_obs : ep.obs) {
            put_u32(os, static_cast<uint32_t>(agent_obs.size()));
            for (const auto& o : agent_obs) put_f32s(os, o);
        }
        for (const auto& agent_actions : ep.actions) put_i32s(os, agent_actions);
        put_f32s(os, ep.rewards);
    }
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

LabeledDataset load_dataset(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open dataset '" + path + "'");
    std::string line;
    if (!std::getline(is, line) || line != kDatasetMagic) {
        throw std::runtime_error("'" + path + "' is not a " + kDatasetMagic + " file");
    }
    LabeledDataset ds;
    size_t n_episodes = 0;
    while (std::getline(is, line) && line != "end_header") {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "env") {
            ls >> ds.env_name;
        } else if (key == "config_digest") {
            ls >> ds.config_digest;
        } else if (key == "n_agents") {
            ls >> ds.n_agents;
        } else if (key == "obs_dim") {
            ls >> ds.obs_dim;
        } else if (key == "state_dim") {
            ls >> ds.state_dim;
        } else if (key == "n_actions") {
            ls >> ds.n_actions;
        } else if (key == "episodes") {
            ls >> n_episodes;
        } else {
            throw std::runtime_error("unknown dataset header field '" + key + "'");
        }
    }
    if (line != "end_header") throw std::runtime_error("dataset header not terminated");

    ds.episodes.resize(n_episodes);
    for (auto& ep : ds.episodes) {
        ep.seed = get_u64(is);
        const uint32_t steps = get_u32(is);
        ep.terminated = is.get() == 1;
        const uint32_t n_states = get_u32(is);
        if (n_states != steps + 1) throw std::runtime_error("dataset episode is inconsistent");
        ep.states.resize(n_states);
        for (auto& s : ep.states) {
            s = get_f32s(is);
            if (static_cast<int>(s.size()) != ds.state_dim) {
                throw std::runtime_error("dataset state dimension mismatch");
            }
        }
        ep.obs.resize(ds.n_agents);
        for (auto& agent_obs : ep.obs) {
            agent_obs.resize(get_u32(is));
            if (agent_obs.size() != n_states) throw std::runtime_error("dataset episode is inconsistent");
            for (auto& o : agent_obs) {
                o = get_f32s(is);
                if (static_cast<int>(o.size()) != ds.obs_dim) {
                    throw std::runtime_error("dataset observation dimension mismatch");
                }
            }
        }
        ep.actions.resize(ds.n_agents);
        for (auto& agent_actions : ep.actions) {
            agent_actions = get_i32s(is);
            if (agent_actions.size() != steps) throw std::runtime_error("dataset episode is inconsistent");
        }
        ep.rewards = get_f32s(is);
        if (ep.rewards.size() != steps) throw std::runtime_error("dataset episode is inconsistent");
    }
    return ds;
}

void require_compatible(const LabeledDataset& ds, const Environment& env) {
    if (ds.env_name != env.name()) {
        throw std::runtime_error("dataset was collected on environment '" + ds.env_name +
                                 "', expected '" + env.name() + "'");
    }
    const std::string digest = content_digest(env.config_string());
    if (ds.config_digest != digest) {
        throw std::runtime_error("dataset config digest " + ds.config_digest +
                                 " does not match environment config digest " + digest);
    }
}

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
    if (capacity_ < 1) throw std::invalid_argument("ReplayBuffer: capacity must be >= 1");
}

void ReplayBuffer::push(RolloutEpisode episode) {
    total_transitions_ += static_cast<size_t>(episode.length());
    episodes_.push_back(std::move(episode));
    if (episodes_.size() > capacity_) {
        total_transitions_ -= static_cast<size_t>(episodes_.front().length());
        episodes_.pop_front();
    }
}

double ReplayBuffer::mean_episode_length() const {
    if (episodes_.empty()) return 0.0;
    return static_cast<double>(total_transitions_) / static_cast<double>(episodes_.size());
}

std::vector<size_t> ReplayBuffer::sample_episodes(size_t batch, Rng& rng) const {
    if (episodes_.empty()) throw std::logic_error("ReplayBuffer: sampling from an empty buffer");
    std::vector<size_t> out(batch);
    for (auto& idx : out) idx = rng.uniform_int(episodes_.size());
    return out;
}

std::vector<ReplayBuffer::TransitionIdx> ReplayBuffer::sample_transitions(size_t batch,
                                                                          Rng& rng) const {
    if (total_transitions_ == 0) {
        throw std::logic_error("ReplayBuffer: sampling from an empty buffer");
    }
    std::vector<TransitionIdx> out;
    out.reserve(batch);
    // Uniform over all stored transitions, so long episodes contribute
    // proportionally more samples.
    std::vector<size_t> cumulative(episodes_.size());
    size_t acc = 0;
    for (size_t e = 0; e < episodes_.size(); ++e) {
        acc += static_cast<size_t>(episodes_[e].length());
        cumulative[e] = acc;
    }
    for (size_t k = 0; k < batch; ++k) {
        const size_t u = rng.uniform_int(total_transitions_);
        const size_t e =
            std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
        const size_t base = e == 0 ? 0 : cumulative[e - 1];
        out.push_back({e, static_cast<int>(u - base)});
    }
    return out;
}

}  // namespace bmarl
