// Empirical estimators: source risk, the gamma-weighted disparity term, the
// bounded proxy of the combined risk, and the label-using combined-risk
// tracker (evaluation only).
#pragma once

#include <span>
#include <stdexcept>

#include "emix/vicinal.hpp"

namespace emix {

struct DisparityWeights {
    double gamma = 8.0;
    double eta0 = 0.1;
};

// (1/n) sum -log softmax(scorer(x))[y] over hard-labeled samples.
inline double empirical_source_risk(std::span<const LabeledSample> batch, const ScorerFn& scorer) {
    if (batch.empty()) throw std::invalid_argument("empirical_source_risk: empty batch");
    double s = 0.0;
    for (const LabeledSample& smp : batch)
        s += loss_source(scorer(smp.features), argmax_label(smp.label));
    return s / static_cast<double>(batch.size());
}

// -(gamma/n_s) sum ls(D(x), h'(x)) + (1/n_t) sum lt(D(x), h'(x)), where h'
// is the argmax class of head_c's scores at x.
inline double empirical_disparity(std::span<const LabeledSample> src_batch,
                                  std::span<const Vec> tgt_features, const ScorerFn& head_c,
                                  const ScorerFn& head_d, double gamma) {
    if (src_batch.empty() || tgt_features.empty())
        throw std::invalid_argument("empirical_disparity: empty batch");
    double src = 0.0;
    for (const LabeledSample& smp : src_batch)
        src += loss_source(head_d(smp.features), argmax_label(head_c(smp.features)));
    double tgt = 0.0;
    for (const Vec& x : tgt_features) tgt += loss_target(head_d(x), argmax_label(head_c(x)));
    return -gamma * src / static_cast<double>(src_batch.size()) +
           tgt / static_cast<double>(tgt_features.size());
}

// Mean-square proxy of the combined risk: both halves compare the proxy
// head's softmax output against simplex labels.
inline double proxy_combined_risk(std::span<const LabeledSample> src_batch,
                                  std::span<const LabeledSample> emix_batch,
                                  const ScorerFn& head_cstar) {
    if (src_batch.empty() || emix_batch.empty())
        throw std::invalid_argument("proxy_combined_risk: empty batch");
    double s = 0.0;
    for (const LabeledSample& smp : src_batch)
        s += loss_mse(softmax(head_cstar(smp.features)), smp.label);
    double e = 0.0;
    for (const LabeledSample& smp : emix_batch)
        e += loss_mse(softmax(head_cstar(smp.features)), smp.label);
    return s / static_cast<double>(src_batch.size()) + e / static_cast<double>(emix_batch.size());
}

// Combined-risk tracker over ground-truth target labels. Evaluation only;
// nothing here feeds a parameter update. Uses the source loss on both
// domains (the symmetric single-loss form).
inline double oracle_combined_risk(std::span<const LabeledSample> src_batch,
                                   std::span<const Vec> tgt_features,
                                   std::span<const int> tgt_labels, const ScorerFn& scorer) {
    if (src_batch.empty() || tgt_features.empty() || tgt_features.size() != tgt_labels.size())
        throw std::invalid_argument("oracle_combined_risk: bad batches");
    double s = 0.0;
    for (const LabeledSample& smp : src_batch)
        s += loss_source(scorer(smp.features), argmax_label(smp.label));
    double t = 0.0;
    for (std::size_t i = 0; i < tgt_features.size(); ++i)
        t += loss_source(scorer(tgt_features[i]), tgt_labels[i]);
    return s / static_cast<double>(src_batch.size()) + t / static_cast<double>(tgt_features.size());
}

// Asymmetric double-loss variant of the tracker (source loss on the source
// domain, target loss on the target domain).
inline double oracle_combined_risk_double_loss(std::span<const LabeledSample> src_batch,
                                               std::span<const Vec> tgt_features,
                                               std::span<const int> tgt_labels,
                                               const ScorerFn& scorer) {
    if (src_batch.empty() || tgt_features.empty() || tgt_features.size() != tgt_labels.size())
        throw std::invalid_argument("oracle_combined_risk_double_loss: bad batches");
    double s = 0.0;
    for (const LabeledSample& smp : src_batch)
        s += loss_source(scorer(smp.features), argmax_label(smp.label));
    double t = 0.0;
    for (std::size_t i = 0; i < tgt_features.size(); ++i)
        t += loss_target(scorer(tgt_features[i]), tgt_labels[i]);
    return s / static_cast<double>(src_batch.size()) + t / static_cast<double>(tgt_features.size());
}

}  // namespace emix
