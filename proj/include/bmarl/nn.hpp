#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bmarl/rng.hpp"

namespace bmarl::nn {

using Vec = std::vector<double>;

// One parameter block: values plus an accumulated-gradient buffer.
struct Tensor {
    Vec w;
    Vec g;

    explicit Tensor(size_t n = 0) : w(n, 0.0), g(n, 0.0) {}
    size_t size() const { return w.size(); }
};

struct ParamRef {
    std::string name;
    Tensor* tensor = nullptr;
};
using ParamList = std::vector<ParamRef>;

size_t param_count(const ParamList& params);
void zero_grads(const ParamList& params);
Vec flatten_values(const ParamList& params);
Vec flatten_grads(const ParamList& params);
void assign_values(const ParamList& params, const Vec& flat);

// Polyak averaging: target <- tau * online + (1 - tau) * target.
void soft_update(const ParamList& target, const ParamList& online, double tau);
void hard_copy(const ParamList& target, const ParamList& online);

// Fully connected layer, row-major weights, PyTorch-style U(-1/sqrt(in), ..)
// initialization.
struct Linear {
    int in = 0, out = 0;
    Tensor W, b;

    void init(int in_dim, int out_dim, Rng& rng);
    void forward(const double* x, double* y) const;
    // gy = dL/dy. Accumulates dL/dW and dL/db unless acc_params is false;
    // adds dL/dx into gx when gx is non-null.
    void backward(const double* x, const double* gy, double* gx, bool acc_params = true);
    void params(const std::string& prefix, ParamList& out_list);
};

// Feed-forward net with ReLU hidden activations and a linear output layer.
struct Mlp {
    std::vector<Linear> layers;

    struct Cache {
        std::vector<Vec> x;  // x[i] = input to layer i; x.back() = output
    };

    void init(const std::vector<int>& dims, Rng& rng);
    int in_dim() const { return layers.front().in; }
    int out_dim() const { return layers.back().out; }

    Vec forward(const Vec& x, Cache* cache = nullptr) const;
    // Returns dL/dinput; accumulates parameter gradients unless acc_params
    // is false (used where a net acts as a frozen critic).
    Vec backward(const Cache& cache, const Vec& gy, bool acc_params = true);
    void params(const std::string& prefix, ParamList& out_list);
};

// Single GRU cell:
//   r = sigmoid(W_ir x + b_ir + W_hr h + b_hr)
//   z = sigmoid(W_iz x + b_iz + W_hz h + b_hz)
//   n = tanh(W_in x + b_in + r * (W_hn h + b_hn))
//   h' = (1 - z) * n + z * h
struct GruCell {
    int in = 0, hidden = 0;
    Linear ih;  // 3H x in, gate order r, z, n
    Linear hh;  // 3H x H

    struct Cache {
        Vec x, h_prev, r, z, n, un;  // un = W_hn h + b_hn
    };

    void init(int in_dim, int hidden_dim, Rng& rng);
    Vec initial_hidden() const { return Vec(hidden, 0.0); }
    Vec step(const Vec& x, const Vec& h_prev, Cache* cache = nullptr) const;
    // One BPTT step: gh_new = dL/dh'. Returns dL/dh_prev, accumulates
    // parameter grads, and adds dL/dx into gx when non-null.
    Vec backward_step(const Cache& cache, const Vec& gh_new, Vec* gx = nullptr);
    void params(const std::string& prefix, ParamList& out_list);
};

// Adam with per-tensor moment buffers.
struct Adam {
    double lr = 1e-3;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    long step_count = 0;
    std::vector<Vec> m, v;

    void init(const ParamList& params, double learning_rate);
    void step(const ParamList& params);
};

}  // namespace bmarl::nn
