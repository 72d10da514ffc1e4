// Scoring-function losses: softmax, the hard-label extractor, the source and
// target cross-entropy variants, and the bounded mean-square loss.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "emix/linalg.hpp"

namespace emix {

// Floor for log(1 - softmax_c); keeps the modified cross-entropy finite when
// the discriminator saturates.
inline constexpr double kTargetLossEps = 1e-12;
inline const double kTargetLossFloor = std::log(kTargetLossEps);

// Index of the maximal coordinate; ties break toward the lowest index.
inline int argmax_label(const Vec& scores) {
    if (scores.empty()) throw std::invalid_argument("argmax_label: empty vector");
    int best = 0;
    for (int i = 1; i < static_cast<int>(scores.size()); ++i)
        if (scores[i] > scores[best]) best = i;
    return best;
}

inline double log_sum_exp(const Vec& v) {
    double m = v[0];
    for (double x : v) m = std::max(m, x);
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

inline Vec softmax(const Vec& v) {
    if (v.empty()) throw std::invalid_argument("softmax: empty vector");
    double m = v[0];
    for (double x : v) m = std::max(m, x);
    Vec p(v.size());
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        p[i] = std::exp(v[i] - m);
        s += p[i];
    }
    for (double& x : p) x /= s;
    return p;
}

inline void check_class(const Vec& scores, int c, const char* who) {
    if (c < 0 || c >= static_cast<int>(scores.size())) throw std::invalid_argument(who);
}

// -log softmax(scores)[c], evaluated in log space. Scores are shifted by
// the true coordinate first so near-zero losses keep full precision.
inline double loss_source(const Vec& scores, int c) {
    check_class(scores, c, "loss_source: class index out of range");
    Vec shifted = scores;
    for (double& v : shifted) v -= scores[c];
    return log_sum_exp(shifted);
}

// log(1 - softmax(scores)[c]), clamped below at log(1e-12).
// Evaluated as logsumexp over the complement minus logsumexp over all.
inline double loss_target(const Vec& scores, int c) {
    check_class(scores, c, "loss_target: class index out of range");
    if (scores.size() == 1) return kTargetLossFloor;
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (static_cast<int>(i) != c) m = std::max(m, scores[i]);
    double rest = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (static_cast<int>(i) != c) rest += std::exp(scores[i] - m);
    const double v = m + std::log(rest) - log_sum_exp(scores);
    return std::max(v, kTargetLossFloor);
}

// (1/K) sum_k (prediction_k - label_k)^2 over two simplex vectors.
inline double loss_mse(const Vec& prediction, const Vec& label) {
    if (prediction.size() != label.size() || prediction.empty())
        throw std::invalid_argument("loss_mse: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < prediction.size(); ++i) {
        const double d = prediction[i] - label[i];
        s += d * d;
    }
    return s / static_cast<double>(prediction.size());
}

// Cross-entropy against a soft label, -sum_k y_k log p_k.
inline double loss_ce_soft(const Vec& scores, const Vec& label) {
    if (scores.size() != label.size() || scores.empty())
        throw std::invalid_argument("loss_ce_soft: length mismatch");
    const double lse = log_sum_exp(scores);
    double s = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) s += label[i] * (lse - scores[i]);
    return s;
}

// ---- adjoints (d loss / d scores), used by the trainer ----

inline Vec loss_source_adjoint(const Vec& scores, int c) {
    Vec adj = softmax(scores);
    adj[c] -= 1.0;
    return adj;
}

inline Vec loss_target_adjoint(const Vec& scores, int c) {
    const Vec p = softmax(scores);
    double rest = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (static_cast<int>(i) != c) rest += p[i];
    Vec adj(p.size(), 0.0);
    if (rest <= kTargetLossEps) return adj;  // clamped region is flat
    for (std::size_t i = 0; i < p.size(); ++i)
        adj[i] = (static_cast<int>(i) == c) ? -p[c] : p[c] * p[i] / rest;
    return adj;
}

// d/d scores of loss_mse(softmax(scores), label).
inline Vec mse_softmax_adjoint(const Vec& scores, const Vec& label) {
    const Vec p = softmax(scores);
    const double k = static_cast<double>(p.size());
    double inner = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) inner += p[i] * (p[i] - label[i]);
    Vec adj(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        adj[i] = (2.0 / k) * p[i] * ((p[i] - label[i]) - inner);
    return adj;
}

inline Vec ce_soft_adjoint(const Vec& scores, const Vec& label) {
    Vec adj = softmax(scores);
    for (std::size_t i = 0; i < adj.size(); ++i) adj[i] -= label[i];
    return adj;
}

}  // namespace emix
