// Small multilayer perceptron with exact reverse-mode gradients.
//
// Hidden layers use the rectifier, the output layer is affine (raw scores).
// Initialization is uniform in +-sqrt(6/(fan_in+fan_out)) with zero biases.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "emix/linalg.hpp"

namespace emix {

struct Layer {
    Mat w;
    Vec b;
};

struct MlpParams {
    std::vector<Layer> layers;

    std::size_t input_dim() const { return layers.front().w.cols; }
    std::size_t output_dim() const { return layers.back().w.rows; }

    std::size_t param_count() const {
        std::size_t n = 0;
        for (const Layer& l : layers) n += l.w.data.size() + l.b.size();
        return n;
    }
};

// Same shape as its MlpParams; accumulates partial derivatives.
struct GradientBuffer {
    std::vector<Layer> layers;

    void zero() {
        for (Layer& l : layers) {
            std::fill(l.w.data.begin(), l.w.data.end(), 0.0);
            std::fill(l.b.begin(), l.b.end(), 0.0);
        }
    }
};

inline GradientBuffer make_grad(const MlpParams& p) {
    GradientBuffer g;
    g.layers.reserve(p.layers.size());
    for (const Layer& l : p.layers)
        g.layers.push_back({Mat(l.w.rows, l.w.cols, 0.0), Vec(l.b.size(), 0.0)});
    return g;
}

// Flat coordinate access, layer by layer, weights then bias. Used by the
// optimizer and the finite-difference probe.
inline double& param_at(std::vector<Layer>& layers, std::size_t flat) {
    for (Layer& l : layers) {
        if (flat < l.w.data.size()) return l.w.data[flat];
        flat -= l.w.data.size();
        if (flat < l.b.size()) return l.b[flat];
        flat -= l.b.size();
    }
    throw std::invalid_argument("param_at: index out of range");
}

inline double param_at(const std::vector<Layer>& layers, std::size_t flat) {
    return param_at(const_cast<std::vector<Layer>&>(layers), flat);
}

inline MlpParams make_mlp(const std::vector<std::size_t>& dims, std::uint64_t seed) {
    if (dims.size() < 2) throw std::invalid_argument("make_mlp: need at least input and output dims");
    std::mt19937_64 rng(seed);
    MlpParams p;
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        const std::size_t fan_in = dims[i], fan_out = dims[i + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        std::uniform_real_distribution<double> u(-limit, limit);
        Layer l{Mat(fan_out, fan_in), Vec(fan_out, 0.0)};
        for (double& w : l.w.data) w = u(rng);
        p.layers.push_back(std::move(l));
    }
    return p;
}

struct ForwardCache {
    Vec input;
    std::vector<Vec> pre;  // z_l per layer
    std::vector<Vec> act;  // post-activation per layer; act.back() is the raw output
};

inline Vec forward(const MlpParams& p, const Vec& x, ForwardCache* cache = nullptr) {
    if (x.size() != p.input_dim()) throw std::invalid_argument("forward: input dimension mismatch");
    if (cache) {
        cache->input = x;
        cache->pre.clear();
        cache->act.clear();
    }
    Vec a = x;
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
        Vec z = matvec(p.layers[l].w, a);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] += p.layers[l].b[i];
        if (cache) cache->pre.push_back(z);
        if (l + 1 < p.layers.size()) {
            for (double& v : z)
                if (v < 0.0) v = 0.0;  // rectifier on hidden layers
        }
        if (cache) cache->act.push_back(z);
        a = std::move(z);
    }
    return a;
}

// Reverse-mode derivatives of the scalar whose output adjoint is supplied.
// Accumulates into `grad` (callers zero it between optimizer steps) and
// returns the adjoint with respect to the input vector.
inline Vec backward(const MlpParams& p, const ForwardCache& cache, const Vec& out_adjoint,
                    GradientBuffer& grad) {
    const std::size_t n_layers = p.layers.size();
    if (cache.pre.size() != n_layers || cache.act.size() != n_layers ||
        cache.input.size() != p.input_dim())
        throw std::invalid_argument("backward: cache does not match params");
    for (std::size_t l = 0; l < n_layers; ++l)
        if (cache.pre[l].size() != p.layers[l].w.rows)
            throw std::invalid_argument("backward: cache does not match params");
    if (out_adjoint.size() != p.output_dim())
        throw std::invalid_argument("backward: adjoint dimension mismatch");
    if (grad.layers.size() != n_layers)
        throw std::invalid_argument("backward: gradient buffer shape mismatch");

    Vec delta = out_adjoint;
    for (std::size_t l = n_layers; l-- > 0;) {
        const Vec& below = (l == 0) ? cache.input : cache.act[l - 1];
        Layer& gl = grad.layers[l];
        if (gl.w.rows != p.layers[l].w.rows || gl.w.cols != p.layers[l].w.cols)
            throw std::invalid_argument("backward: gradient buffer shape mismatch");
        for (std::size_t r = 0; r < gl.w.rows; ++r) {
            double* grow = gl.w.data.data() + r * gl.w.cols;
            for (std::size_t c = 0; c < gl.w.cols; ++c) grow[c] += delta[r] * below[c];
            gl.b[r] += delta[r];
        }
        delta = matvec_transposed(p.layers[l].w, delta);
        if (l > 0) {
            const Vec& z = cache.pre[l - 1];
            for (std::size_t i = 0; i < delta.size(); ++i)
                if (z[i] <= 0.0) delta[i] = 0.0;
        }
    }
    return delta;
}

// Central-difference audit of an analytic gradient. Returns the max over all
// coordinates of |analytic - numeric| / max(1e-8, |analytic| + |numeric|).
inline double finite_diff_check(const std::function<double(const MlpParams&)>& loss_fn,
                                const std::function<GradientBuffer(const MlpParams&)>& grad_fn,
                                const MlpParams& params, double step) {
    GradientBuffer analytic = grad_fn(params);
    MlpParams probe = params;
    double worst = 0.0;
    const std::size_t n = params.param_count();
    for (std::size_t i = 0; i < n; ++i) {
        double& v = param_at(probe.layers, i);
        const double saved = v;
        v = saved + step;
        const double up = loss_fn(probe);
        v = saved - step;
        const double down = loss_fn(probe);
        v = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double a = param_at(analytic.layers, i);
        const double err = std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
        if (err > worst) worst = err;
    }
    return worst;
}

}  // namespace emix
