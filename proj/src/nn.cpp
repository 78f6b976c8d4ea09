#include "bmarl/nn.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace bmarl::nn {

size_t param_count(const ParamList& params) {
    size_t n = 0;
    for (const auto& p : params) n += p.tensor->size();
    return n;
}

void zero_grads(const ParamList& params) {
    for (const auto& p : params) std::fill(p.tensor->g.begin(), p.tensor->g.end(), 0.0);
}

Vec flatten_values(const ParamList& params) {
    Vec flat;
    flat.reserve(param_count(params));
    for (const auto& p : params) flat.insert(flat.end(), p.tensor->w.begin(), p.tensor->w.end());
    return flat;
}

Vec flatten_grads(const ParamList& params) {
    Vec flat;
    flat.reserve(param_count(params));
    for (const auto& p : params) flat.insert(flat.end(), p.tensor->g.begin(), p.tensor->g.end());
    return flat;
}

void assign_values(const ParamList& params, const Vec& flat) {
    if (flat.size() != param_count(params)) {
        throw std::invalid_argument("assign_values: size mismatch");
    }
    size_t off = 0;
    for (const auto& p : params) {
        std::copy(flat.begin() + off, flat.begin() + off + p.tensor->size(), p.tensor->w.begin());
        off += p.tensor->size();
    }
}

void soft_update(const ParamList& target, const ParamList& online, double tau) {
    if (target.size() != online.size()) throw std::invalid_argument("soft_update: shape mismatch");
    for (size_t i = 0; i < target.size(); ++i) {
        Vec& t = target[i].tensor->w;
        const Vec& o = online[i].tensor->w;
        if (t.size() != o.size()) throw std::invalid_argument("soft_update: shape mismatch");
        for (size_t k = 0; k < t.size(); ++k) t[k] = tau * o[k] + (1.0 - tau) * t[k];
    }
}

void hard_copy(const ParamList& target, const ParamList& online) {
    soft_update(target, online, 1.0);
}

void Linear::init(int in_dim, int out_dim, Rng& rng) {
    in = in_dim;
    out = out_dim;
    W = Tensor(static_cast<size_t>(in) * out);
    b = Tensor(out);
    const double k = 1.0 / std::sqrt(static_cast<double>(in));
    for (auto& w : W.w) w = rng.uniform(-k, k);
    for (auto& w : b.w) w = rng.uniform(-k, k);
}

void Linear::forward(const double* x, double* y) const {
    const double* w = W.w.data();
    for (int o = 0; o < out; ++o) {
        double acc = b.w[o];
        const double* row = w + static_cast<size_t>(o) * in;
        for (int i = 0; i < in; ++i) acc += row[i] * x[i];
        y[o] = acc;
    }
}

void Linear::backward(const double* x, const double* gy, double* gx, bool acc_params) {
    if (acc_params) {
        double* gw = W.g.data();
        for (int o = 0; o < out; ++o) {
            const double g = gy[o];
            if (g == 0.0) continue;
            double* row = gw + static_cast<size_t>(o) * in;
            for (int i = 0; i < in; ++i) row[i] += g * x[i];
            b.g[o] += g;
        }
    }
    if (gx != nullptr) {
        const double* w = W.w.data();
        for (int o = 0; o < out; ++o) {
            const double g = gy[o];
            if (g == 0.0) continue;
            const double* row = w + static_cast<size_t>(o) * in;
            for (int i = 0; i < in; ++i) gx[i] += g * row[i];
        }
    }
}

void Linear::params(const std::string& prefix, ParamList& out_list) {
    out_list.push_back({prefix + ".W", &W});
    out_list.push_back({prefix + ".b", &b});
}

void Mlp::init(const std::vector<int>& dims, Rng& rng) {
    if (dims.size() < 2) throw std::invalid_argument("Mlp: need at least in/out dims");
    layers.resize(dims.size() - 1);
    for (size_t i = 0; i + 1 < dims.size(); ++i) layers[i].init(dims[i], dims[i + 1], rng);
}

Vec Mlp::forward(const Vec& x, Cache* cache) const {
    if (static_cast<int>(x.size()) != in_dim()) throw std::invalid_argument("Mlp: bad input size");
    if (cache != nullptr) {
        cache->x.assign(layers.size() + 1, Vec{});
        cache->x[0] = x;
    }
    Vec cur = x;
    for (size_t l = 0; l < layers.size(); ++l) {
        Vec next(layers[l].out);
        layers[l].forward(cur.data(), next.data());
        if (l + 1 < layers.size()) {
            for (auto& v : next) v = v > 0.0 ? v : 0.0;  // ReLU on hidden layers
        }
        cur = std::move(next);
        if (cache != nullptr) cache->x[l + 1] = cur;
    }
    return cur;
}

Vec Mlp::backward(const Cache& cache, const Vec& gy, bool acc_params) {
    Vec grad = gy;
    for (size_t l = layers.size(); l-- > 0;) {
        if (l + 1 < layers.size()) {
            // ReLU: cache->x[l+1] holds post-activation values.
            const Vec& act = cache.x[l + 1];
            for (size_t i = 0; i < grad.size(); ++i) {
                if (act[i] <= 0.0) grad[i] = 0.0;
            }
        }
        Vec gx(layers[l].in, 0.0);
        layers[l].backward(cache.x[l].data(), grad.data(), gx.data(), acc_params);
        grad = std::move(gx);
    }
    return grad;
}

void Mlp::params(const std::string& prefix, ParamList& out_list) {
    for (size_t l = 0; l < layers.size(); ++l) {
        layers[l].params(prefix + ".l" + std::to_string(l), out_list);
    }
}

void GruCell::init(int in_dim, int hidden_dim, Rng& rng) {
    in = in_dim;
    hidden = hidden_dim;
    ih.init(in, 3 * hidden, rng);
    hh.init(hidden, 3 * hidden, rng);
}

static inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Vec GruCell::step(const Vec& x, const Vec& h_prev, Cache* cache) const {
    if (static_cast<int>(x.size()) != in || static_cast<int>(h_prev.size()) != hidden) {
        throw std::invalid_argument("GruCell: bad input size");
    }
    Vec a(3 * hidden), u(3 * hidden);
    ih.forward(x.data(), a.data());
    hh.forward(h_prev.data(), u.data());
    Vec r(hidden), z(hidden), n(hidden), h_new(hidden);
    for (int i = 0; i < hidden; ++i) {
        r[i] = sigmoid(a[i] + u[i]);
        z[i] = sigmoid(a[hidden + i] + u[hidden + i]);
        n[i] = std::tanh(a[2 * hidden + i] + r[i] * u[2 * hidden + i]);
        h_new[i] = (1.0 - z[i]) * n[i] + z[i] * h_prev[i];
    }
    if (cache != nullptr) {
        cache->x = x;
        cache->h_prev = h_prev;
        cache->r = r;
        cache->z = z;
        cache->n = n;
        cache->un = Vec(u.begin() + 2 * hidden, u.end());
    }
    return h_new;
}

Vec GruCell::backward_step(const Cache& cache, const Vec& gh_new, Vec* gx) {
    const int H = hidden;
    Vec da(3 * H), du(3 * H);
    Vec gh_prev(H, 0.0);
    for (int i = 0; i < H; ++i) {
        const double r = cache.r[i], z = cache.z[i], n = cache.n[i];
        const double g = gh_new[i];
        const double dn = g * (1.0 - z);
        const double dz = g * (cache.h_prev[i] - n);
        gh_prev[i] = g * z;
        const double dpre_n = dn * (1.0 - n * n);
        const double dr = dpre_n * cache.un[i];
        const double dpre_r = dr * r * (1.0 - r);
        const double dpre_z = dz * z * (1.0 - z);
        da[i] = dpre_r;
        da[H + i] = dpre_z;
        da[2 * H + i] = dpre_n;
        du[i] = dpre_r;
        du[H + i] = dpre_z;
        du[2 * H + i] = dpre_n * r;
    }
    if (gx != nullptr) {
        gx->assign(in, 0.0);
        ih.backward(cache.x.data(), da.data(), gx->data());
    } else {
        ih.backward(cache.x.data(), da.data(), nullptr);
    }
    hh.backward(cache.h_prev.data(), du.data(), gh_prev.data());
    return gh_prev;
}

void GruCell::params(const std::string& prefix, ParamList& out_list) {
    ih.params(prefix + ".ih", out_list);
    hh.params(prefix + ".hh", out_list);
}

void Adam::init(const ParamList& params, double learning_rate) {
    lr = learning_rate;
    step_count = 0;
    m.clear();
    v.clear();
    for (const auto& p : params) {
        m.emplace_back(p.tensor->size(), 0.0);
        v.emplace_back(p.tensor->size(), 0.0);
    }
}

void Adam::step(const ParamList& params) {
    if (m.size() != params.size()) throw std::logic_error("Adam: not initialized for these params");
    ++step_count;
    const double bc1 = 1.0 - std::pow(beta1, step_count);
    const double bc2 = 1.0 - std::pow(beta2, step_count);
    for (size_t t = 0; t < params.size(); ++t) {
        Vec& w = params[t].tensor->w;
        const Vec& g = params[t].tensor->g;
        Vec& mt = m[t];
        Vec& vt = v[t];
        for (size_t i = 0; i < w.size(); ++i) {
            mt[i] = beta1 * mt[i] + (1.0 - beta1) * g[i];
            vt[i] = beta2 * vt[i] + (1.0 - beta2) * g[i] * g[i];
            const double mhat = mt[i] / bc1;
            const double vhat = vt[i] / bc2;
            w[i] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
    }
}

}  // namespace bmarl::nn
