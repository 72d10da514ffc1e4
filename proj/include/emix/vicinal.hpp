// Vicinal sample machinery: mixup pairs, e-mixup batches, and high-confidence
// pseudo-label selection.
//
// e-mixup draw order, per anchor in batch order: one uniform draw over the
// candidate partner classes, then one uniform draw over that class's members.
// The single-class fallback consumes one uniform draw over the whole batch.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "emix/losses.hpp"

namespace emix {

enum class Origin { Source, TargetPseudo, Mixed };

struct LabeledSample {
    Vec features;
    Vec label;  // on the probability simplex
    Origin origin = Origin::Source;
};

struct MixParams {
    double alpha = 0.6;
    std::uint64_t seed = 0;
};

// Which class the e-mixup partner is drawn from: a class the anchor's label
// puts minimal weight on (the different-class reading) or the anchor's own
// argmax class (the same-class reading).
enum class PartnerMode { Different, Same };

using ScorerFn = std::function<Vec(const Vec&)>;

inline LabeledSample mixup_pair(const LabeledSample& s1, const LabeledSample& s2, double alpha) {
    if (s1.features.size() != s2.features.size() || s1.label.size() != s2.label.size())
        throw std::invalid_argument("mixup_pair: dimension mismatch");
    LabeledSample out;
    out.origin = Origin::Mixed;
    out.features.resize(s1.features.size());
    out.label.resize(s1.label.size());
    for (std::size_t i = 0; i < out.features.size(); ++i)
        out.features[i] = alpha * s1.features[i] + (1.0 - alpha) * s2.features[i];
    for (std::size_t i = 0; i < out.label.size(); ++i)
        out.label[i] = alpha * s1.label[i] + (1.0 - alpha) * s2.label[i];
    return out;
}

// Ordinary mixup: each anchor is paired with a uniformly drawn batch member.
inline std::vector<LabeledSample> mixup_batch(const std::vector<LabeledSample>& batch,
                                              double alpha, std::mt19937_64& rng) {
    if (batch.empty()) throw std::invalid_argument("mixup_batch: empty batch");
    std::uniform_int_distribution<std::size_t> pick(0, batch.size() - 1);
    std::vector<LabeledSample> out;
    out.reserve(batch.size());
    for (const LabeledSample& anchor : batch) out.push_back(mixup_pair(anchor, batch[pick(rng)], alpha));
    return out;
}

inline std::vector<LabeledSample> e_mixup(const std::vector<LabeledSample>& batch, double alpha,
                                          int k, std::mt19937_64& rng,
                                          PartnerMode mode = PartnerMode::Different) {
    if (k < 2) throw std::invalid_argument("e_mixup: need at least two classes");
    if (batch.empty()) throw std::invalid_argument("e_mixup: empty batch");

    // Batch members by hard class.
    std::vector<std::vector<std::size_t>> by_class(k);
    for (std::size_t i = 0; i < batch.size(); ++i)
        by_class[argmax_label(batch[i].label)].push_back(i);

    std::vector<LabeledSample> out;
    out.reserve(batch.size());
    for (const LabeledSample& anchor : batch) {
        std::vector<int> candidates;
        if (mode == PartnerMode::Same) {
            const int own = argmax_label(anchor.label);
            if (!by_class[own].empty()) candidates.push_back(own);
        } else {
            // Classes with minimal label coordinate (all zero coordinates of a
            // one-hot label tie), kept only when the batch can serve them.
            double lo = anchor.label[0];
            for (double v : anchor.label) lo = std::min(lo, v);
            for (int c = 0; c < k; ++c)
                if (anchor.label[c] == lo && !by_class[c].empty()) candidates.push_back(c);
            if (candidates.empty()) {
                // Redraw among non-empty classes different from the anchor's own.
                const int own = argmax_label(anchor.label);
                for (int c = 0; c < k; ++c)
                    if (c != own && !by_class[c].empty()) candidates.push_back(c);
            }
        }
        if (candidates.empty()) {
            // Single-class batch: ordinary mixup with a uniform batch partner.
            std::uniform_int_distribution<std::size_t> pick(0, batch.size() - 1);
            out.push_back(mixup_pair(anchor, batch[pick(rng)], alpha));
            continue;
        }
        std::uniform_int_distribution<std::size_t> pick_class(0, candidates.size() - 1);
        const std::vector<std::size_t>& members = by_class[candidates[pick_class(rng)]];
        std::uniform_int_distribution<std::size_t> pick_member(0, members.size() - 1);
        out.push_back(mixup_pair(anchor, batch[members[pick_member(rng)]], alpha));
    }
    return out;
}

inline std::vector<LabeledSample> e_mixup(const std::vector<LabeledSample>& batch,
                                          const MixParams& params, int k,
                                          PartnerMode mode = PartnerMode::Different) {
    std::mt19937_64 rng(params.seed);
    return e_mixup(batch, params.alpha, k, rng, mode);
}

// Target samples whose softmax confidence under `scorer` reaches tau, labeled
// with the one-hot of their argmax class. The empty result is valid.
inline std::vector<LabeledSample> select_confident(const std::vector<Vec>& target_features,
                                                   const ScorerFn& scorer, double tau) {
    std::vector<LabeledSample> out;
    for (const Vec& x : target_features) {
        const Vec p = softmax(scorer(x));
        const int c = argmax_label(p);
        if (p[c] >= tau) {
            LabeledSample s;
            s.features = x;
            s.label.assign(p.size(), 0.0);
            s.label[c] = 1.0;
            s.origin = Origin::TargetPseudo;
            out.push_back(std::move(s));
        }
    }
    return out;
}

}  // namespace emix
