// Exact verification of the learning bounds on small finite instances.
//
// Everything here is an explicit sum over a finite feature space, a finite
// hypothesis list and discrete joint distributions, so every risk, every
// discrepancy and every combined-risk minimum is computed exactly (up to
// double-precision accumulation, absorbed by a 1e-9 slack tolerance).
#pragma once

#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "emix/losses.hpp"

namespace emix::oracle {

// Pairwise losses consume their second argument through its argmax class.
enum class PairLoss { ZeroOne, SourceCE, TargetModCE, AbsDiff };

inline const char* pair_loss_name(PairLoss l) {
    switch (l) {
        case PairLoss::ZeroOne: return "zero-one";
        case PairLoss::SourceCE: return "source-ce";
        case PairLoss::TargetModCE: return "target-modified-ce";
        case PairLoss::AbsDiff: return "abs-diff";
    }
    return "?";
}

inline double pair_loss(PairLoss loss, const Vec& scores, int target_class) {
    switch (loss) {
        case PairLoss::ZeroOne:
            return argmax_label(scores) == target_class ? 0.0 : 1.0;
        case PairLoss::SourceCE:
            return loss_source(scores, target_class);
        case PairLoss::TargetModCE:
            return loss_target(scores, target_class);
        case PairLoss::AbsDiff: {
            // Mean absolute difference between the softmax vector and the
            // one-hot of the target class; a metric on probability vectors.
            const Vec p = softmax(scores);
            double s = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i)
                s += std::abs(p[i] - (static_cast<int>(i) == target_class ? 1.0 : 0.0));
            return s / static_cast<double>(p.size());
        }
    }
    return 0.0;
}

inline double pair_loss_vs(PairLoss loss, const Vec& a, const Vec& b) {
    if (loss == PairLoss::AbsDiff) {
        const Vec pa = softmax(a), pb = softmax(b);
        double s = 0.0;
        for (std::size_t i = 0; i < pa.size(); ++i) s += std::abs(pa[i] - pb[i]);
        return s / static_cast<double>(pa.size());
    }
    return pair_loss(loss, a, argmax_label(b));
}

using ScoreTable = std::vector<Vec>;  // [feature point] -> scores in R^K

struct FiniteInstance {
    std::uint64_t seed = 0;
    std::vector<Vec> feature_points;       // coordinates, carried for completeness
    int num_classes = 0;
    std::vector<Vec> source_joint;         // [x][y], sums to 1
    std::vector<Vec> target_joint;
    std::vector<ScoreTable> hypotheses;    // [h][x] -> scores
    std::vector<std::vector<int>> transformations;  // [g][x] -> x'

    std::size_t num_points() const { return source_joint.size(); }

    void validate() const {
        if (num_classes < 1) throw std::invalid_argument("instance: no classes");
        auto check_joint = [&](const std::vector<Vec>& j) {
            double total = 0.0;
            for (const Vec& row : j) {
                if (row.size() != static_cast<std::size_t>(num_classes))
                    throw std::invalid_argument("instance: joint row width");
                for (double p : row) {
                    if (p < 0.0) throw std::invalid_argument("instance: negative probability");
                    total += p;
                }
            }
            if (std::abs(total - 1.0) > 1e-12)
                throw std::invalid_argument("instance: joint does not sum to 1");
        };
        check_joint(source_joint);
        check_joint(target_joint);
        for (const ScoreTable& h : hypotheses)
            if (h.size() != num_points())
                throw std::invalid_argument("instance: hypothesis not defined on every point");
        for (const std::vector<int>& g : transformations)
            for (int x : g)
                if (x < 0 || x >= static_cast<int>(num_points()))
                    throw std::invalid_argument("instance: transformation out of range");
    }
};

// transformation index meaning "the identity map".
inline constexpr int kIdentityTransform = -1;

inline int apply_transform(const FiniteInstance& inst, int g, int x) {
    return g == kIdentityTransform ? x : inst.transformations[g][x];
}

struct BoundReport {
    std::string theorem_id;
    double lhs = 0.0;
    double rhs = 0.0;
    bool applicable = true;
    std::string witnesses;

    double slack() const { return rhs - lhs; }
    bool holds() const { return slack() >= -1e-9; }
};

// sum_{x,y} p(x,y) loss(h(x), y) over an explicit joint table.
inline double exact_risk(const std::vector<Vec>& joint, const ScoreTable& hyp, PairLoss loss) {
    double s = 0.0;
    for (std::size_t x = 0; x < joint.size(); ++x)
        for (std::size_t y = 0; y < joint[x].size(); ++y)
            if (joint[x][y] != 0.0)
                s += joint[x][y] * pair_loss(loss, hyp[x], static_cast<int>(y));
    return s;
}

// Label risk of hypothesis h composed with transformation g on one domain.
inline double domain_risk(const FiniteInstance& inst, bool target, int h, int g, PairLoss loss) {
    const std::vector<Vec>& joint = target ? inst.target_joint : inst.source_joint;
    double s = 0.0;
    for (std::size_t x = 0; x < joint.size(); ++x) {
        const Vec& scores = inst.hypotheses[h][apply_transform(inst, g, static_cast<int>(x))];
        for (std::size_t y = 0; y < joint[x].size(); ++y)
            if (joint[x][y] != 0.0) s += joint[x][y] * pair_loss(loss, scores, static_cast<int>(y));
    }
    return s;
}

// Discrepancy risk E_x loss(A(g(x)), B(g(x))) under one domain's marginal.
inline double pair_domain_risk(const FiniteInstance& inst, bool target, int a, int b, int g,
                               PairLoss loss) {
    const std::vector<Vec>& joint = target ? inst.target_joint : inst.source_joint;
    double s = 0.0;
    for (std::size_t x = 0; x < joint.size(); ++x) {
        double px = 0.0;
        for (double p : joint[x]) px += p;
        if (px == 0.0) continue;
        const int xt = apply_transform(inst, g, static_cast<int>(x));
        s += px * pair_loss_vs(loss, inst.hypotheses[a][xt], inst.hypotheses[b][xt]);
    }
    return s;
}

// max over hypothesis pairs of |R_src(C',C) - R_tgt(C',C)| on the transformed
// marginals.
inline double discrepancy_distance(const FiniteInstance& inst, int g, PairLoss loss,
                                   std::pair<int, int>* witness = nullptr) {
    double best = 0.0;
    std::pair<int, int> w{0, 0};
    const int n = static_cast<int>(inst.hypotheses.size());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const double d = std::abs(pair_domain_risk(inst, false, a, b, g, loss) -
                                      pair_domain_risk(inst, true, a, b, g, loss));
            if (d > best) {
                best = d;
                w = {a, b};
            }
        }
    if (witness) *witness = w;
    return best;
}

// max over C' of R_tgt^{lt}(C',C) - R_src^{ls}(C',C); the double-loss
// disparity discrepancy relative to a fixed C.
inline double disparity_discrepancy(const FiniteInstance& inst, int c, int g, PairLoss loss_s,
                                    PairLoss loss_t, int* witness = nullptr) {
    if (c < 0 || c >= static_cast<int>(inst.hypotheses.size()))
        throw std::invalid_argument("disparity_discrepancy: C not in hypothesis list");
    double best = -std::numeric_limits<double>::infinity();
    int w = 0;
    for (int cp = 0; cp < static_cast<int>(inst.hypotheses.size()); ++cp) {
        const double d = pair_domain_risk(inst, true, cp, c, g, loss_t) -
                         pair_domain_risk(inst, false, cp, c, g, loss_s);
        if (d > best) {
            best = d;
            w = cp;
        }
    }
    if (witness) *witness = w;
    return best;
}

// min over C* of R_src(C* o G) + R_tgt(C* o G), with the minimizing index.
inline std::pair<double, int> lambda_combined(const FiniteInstance& inst, int g, PairLoss loss) {
    double best = std::numeric_limits<double>::infinity();
    int w = 0;
    for (int h = 0; h < static_cast<int>(inst.hypotheses.size()); ++h) {
        const double v = domain_risk(inst, false, h, g, loss) + domain_risk(inst, true, h, g, loss);
        if (v < best) {
            best = v;
            w = h;
        }
    }
    return {best, w};
}

// Double-loss combined risk: min over C* of R_src^{ls} + R_tgt^{lt}.
inline std::pair<double, int> lambda_combined_double(const FiniteInstance& inst, int g,
                                                     PairLoss loss_s, PairLoss loss_t) {
    double best = std::numeric_limits<double>::infinity();
    int w = 0;
    for (int h = 0; h < static_cast<int>(inst.hypotheses.size()); ++h) {
        const double v =
            domain_risk(inst, false, h, g, loss_s) + domain_risk(inst, true, h, g, loss_t);
        if (v < best) {
            best = v;
            w = h;
        }
    }
    return {best, w};
}

// R_tgt(C o G) <= R_src(C o G) + d_H(src, tgt) + lambda(G).
inline BoundReport check_theorem2(const FiniteInstance& inst, int g, int c, PairLoss loss,
                                  const char* id = "T2") {
    std::pair<int, int> dw;
    const double d = discrepancy_distance(inst, g, loss, &dw);
    const auto [lambda, lw] = lambda_combined(inst, g, loss);
    BoundReport r;
    r.theorem_id = id;
    r.lhs = domain_risk(inst, true, c, g, loss);
    r.rhs = domain_risk(inst, false, c, g, loss) + d + lambda;
    r.witnesses = "d_pair=" + std::to_string(dw.first) + "," + std::to_string(dw.second) +
                  ";lambda=" + std::to_string(lw);
    return r;
}

// Theorem 1 is the identity-transformation corollary of Theorem 2.
inline BoundReport check_theorem1(const FiniteInstance& inst, int c, PairLoss loss) {
    return check_theorem2(inst, kIdentityTransform, c, loss, "T1");
}

// The sandwich around the cross-domain risk of the per-domain minimizers:
//   2*lambda - delta <= R_src(C_t o G) + R_tgt(C_s o G) <= 2*lambda + d + delta.
// Returned as two slack records, lower bound first.
inline std::pair<BoundReport, BoundReport> check_theorem3(const FiniteInstance& inst, int g,
                                                          PairLoss loss) {
    int c_s = 0, c_t = 0;
    double best_s = std::numeric_limits<double>::infinity();
    double best_t = std::numeric_limits<double>::infinity();
    for (int h = 0; h < static_cast<int>(inst.hypotheses.size()); ++h) {
        const double rs = domain_risk(inst, false, h, g, loss);
        const double rt = domain_risk(inst, true, h, g, loss);
        if (rs < best_s) {
            best_s = rs;
            c_s = h;
        }
        if (rt < best_t) {
            best_t = rt;
            c_t = h;
        }
    }
    const double delta = best_s + best_t;
    const double middle =
        domain_risk(inst, false, c_t, g, loss) + domain_risk(inst, true, c_s, g, loss);
    const double d = discrepancy_distance(inst, g, loss);
    const double lambda = lambda_combined(inst, g, loss).first;
    const std::string wit = "C_s=" + std::to_string(c_s) + ";C_t=" + std::to_string(c_t);

    BoundReport lower;
    lower.theorem_id = "T3L";
    lower.lhs = 2.0 * lambda - delta;
    lower.rhs = middle;
    lower.witnesses = wit;

    BoundReport upper;
    upper.theorem_id = "T3U";
    upper.lhs = middle;
    upper.rhs = 2.0 * lambda + d + delta;
    upper.witnesses = wit;
    return {lower, upper};
}

// The two inequalities that replace the triangle requirement in the
// double-loss bound; verified exhaustively over the hypothesis list.
inline bool weaker_condition_holds(const FiniteInstance& inst, int g, int c, PairLoss loss_s,
                                   PairLoss loss_t) {
    const double rt_c = domain_risk(inst, true, c, g, loss_t);
    const double rs_c = domain_risk(inst, false, c, g, loss_s);
    for (int cp = 0; cp < static_cast<int>(inst.hypotheses.size()); ++cp) {
        if (rt_c > pair_domain_risk(inst, true, cp, c, g, loss_t) +
                       domain_risk(inst, true, cp, g, loss_t) + 1e-12)
            return false;
        if (pair_domain_risk(inst, false, cp, c, g, loss_s) >
            domain_risk(inst, false, cp, g, loss_s) + rs_c + 1e-12)
            return false;
    }
    return true;
}

// R_tgt^{lt}(C o G) <= R_src^{ls}(C o G) + d_{C,H}^{ls,lt} + lambda^{ls,lt}(G).
// For loss pairs other than zero-one/zero-one the weaker condition is checked
// first; when it fails the report is marked inapplicable.
inline BoundReport check_theorem4(const FiniteInstance& inst, int g, int c, PairLoss loss_s,
                                  PairLoss loss_t) {
    BoundReport r;
    r.theorem_id = "T4";
    if (!(loss_s == PairLoss::ZeroOne && loss_t == PairLoss::ZeroOne) &&
        !weaker_condition_holds(inst, g, c, loss_s, loss_t)) {
        r.applicable = false;
        r.witnesses = "weaker-condition-failed";
        return r;
    }
    int dw = 0;
    const double d = disparity_discrepancy(inst, c, g, loss_s, loss_t, &dw);
    const auto [lambda, lw] = lambda_combined_double(inst, g, loss_s, loss_t);
    r.lhs = domain_risk(inst, true, c, g, loss_t);
    r.rhs = domain_risk(inst, false, c, g, loss_s) + d + lambda;
    r.witnesses = "d_sup=" + std::to_string(dw) + ";lambda=" + std::to_string(lw);
    return r;
}

// loss(a,c) <= loss(a,b) + loss(b,c) over every vector triple realizable in
// the instance: hypothesis scores at each point plus the one-hot labels.
inline bool check_triangle(PairLoss loss, const FiniteInstance& inst,
                           std::string* counterexample = nullptr) {
    const int k = inst.num_classes;
    for (std::size_t x = 0; x < inst.num_points(); ++x) {
        std::vector<Vec> vecs;
        vecs.reserve(inst.hypotheses.size() + k);
        for (const ScoreTable& h : inst.hypotheses) vecs.push_back(h[x]);
        for (int c = 0; c < k; ++c) {
            Vec onehot(k, 0.0);
            onehot[c] = 1.0;
            vecs.push_back(std::move(onehot));
        }
        const std::size_t n = vecs.size();
        // Memoize loss(a,b) for all ordered pairs at this point.
        std::vector<double> tab(n * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) tab[a * n + b] = pair_loss_vs(loss, vecs[a], vecs[b]);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t c = 0; c < n; ++c) {
                const double ac = tab[a * n + c];
                for (std::size_t b = 0; b < n; ++b) {
                    if (ac > tab[a * n + b] + tab[b * n + c] + 1e-12) {
                        if (counterexample)
                            *counterexample = "x=" + std::to_string(x) + " a=" + std::to_string(a) +
                                              " b=" + std::to_string(b) + " c=" + std::to_string(c);
                        return false;
                    }
                }
            }
    }
    return true;
}

// Seeded generator: uniform-positive joint tables, random score tables plus
// the K constant hypotheses, and a handful of random point maps.
inline FiniteInstance random_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    FiniteInstance inst;
    inst.seed = seed;
    const int m = std::uniform_int_distribution<int>(2, 6)(rng);
    inst.num_classes = std::uniform_int_distribution<int>(2, 3)(rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_real_distribution<double> score(-2.0, 2.0);

    for (int x = 0; x < m; ++x) inst.feature_points.push_back({coord(rng), coord(rng)});

    auto draw_joint = [&]() {
        std::vector<Vec> joint(m, Vec(inst.num_classes, 0.0));
        double total = 0.0;
        for (Vec& row : joint)
            for (double& p : row) {
                p = unit(rng) + 1e-9;
                total += p;
            }
        for (Vec& row : joint)
            for (double& p : row) p /= total;
        return joint;
    };
    inst.source_joint = draw_joint();
    inst.target_joint = draw_joint();

    const int n_random = std::uniform_int_distribution<int>(5, 50 - inst.num_classes)(rng);
    for (int h = 0; h < n_random; ++h) {
        ScoreTable t(m, Vec(inst.num_classes));
        for (Vec& row : t)
            for (double& v : row) v = score(rng);
        inst.hypotheses.push_back(std::move(t));
    }
    for (int c = 0; c < inst.num_classes; ++c) {
        ScoreTable t(m, Vec(inst.num_classes, 0.0));
        for (Vec& row : t) row[c] = 1.0;
        inst.hypotheses.push_back(std::move(t));
    }

    const int n_g = std::uniform_int_distribution<int>(1, 4)(rng);
    std::uniform_int_distribution<int> point(0, m - 1);
    for (int g = 0; g < n_g; ++g) {
        std::vector<int> map(m);
        for (int& x : map) x = point(rng);
        inst.transformations.push_back(std::move(map));
    }
    inst.validate();
    return inst;
}

struct InstanceChecks {
    std::uint64_t seed = 0;
    int chosen_c = 0;
    int chosen_g = 0;
    std::vector<BoundReport> reports;  // T1, T2, T3L, T3U, T4
    double rhs_t2 = 0.0, rhs_t4 = 0.0;

    bool all_hold() const {
        for (const BoundReport& r : reports)
            if (r.applicable && !r.holds()) return false;
        return true;
    }
};

inline InstanceChecks check_instance(const FiniteInstance& inst, std::mt19937_64& pick_rng) {
    InstanceChecks out;
    out.seed = inst.seed;
    out.chosen_c =
        std::uniform_int_distribution<int>(0, static_cast<int>(inst.hypotheses.size()) - 1)(pick_rng);
    out.chosen_g =
        std::uniform_int_distribution<int>(0, static_cast<int>(inst.transformations.size()) - 1)(pick_rng);
    const PairLoss z = PairLoss::ZeroOne;
    out.reports.push_back(check_theorem1(inst, out.chosen_c, z));
    BoundReport t2 = check_theorem2(inst, out.chosen_g, out.chosen_c, z);
    auto [t3l, t3u] = check_theorem3(inst, out.chosen_g, z);
    BoundReport t4 = check_theorem4(inst, out.chosen_g, out.chosen_c, z, z);
    out.rhs_t2 = t2.rhs;
    out.rhs_t4 = t4.rhs;
    out.reports.push_back(std::move(t2));
    out.reports.push_back(std::move(t3l));
    out.reports.push_back(std::move(t3u));
    out.reports.push_back(std::move(t4));
    return out;
}

struct SuiteResult {
    std::vector<InstanceChecks> instances;
    int violations = 0;
    int tighter_count = 0;  // instances where the double-loss rhs is strictly tighter

    bool all_hold() const { return violations == 0; }
    int theorems_held() const {
        bool bad[4] = {false, false, false, false};
        for (const InstanceChecks& ic : instances)
            for (const BoundReport& r : ic.reports)
                if (r.applicable && !r.holds()) {
                    if (r.theorem_id == "T1") bad[0] = true;
                    else if (r.theorem_id == "T2") bad[1] = true;
                    else if (r.theorem_id == "T3L" || r.theorem_id == "T3U") bad[2] = true;
                    else bad[3] = true;
                }
        int held = 0;
        for (bool b : bad) held += b ? 0 : 1;
        return held;
    }
};

inline SuiteResult run_bound_suite(int instances, std::uint64_t seed) {
    SuiteResult res;
    res.instances.reserve(instances);
    for (int i = 0; i < instances; ++i) {
        const std::uint64_t inst_seed = seed_mix(seed, static_cast<std::uint64_t>(i));
        FiniteInstance inst = random_instance(inst_seed);
        std::mt19937_64 pick(seed_mix(inst_seed, 0xC0FFEE));
        InstanceChecks ic = check_instance(inst, pick);
        if (!ic.all_hold()) ++res.violations;
        if (ic.rhs_t4 < ic.rhs_t2 - 1e-6) ++res.tighter_count;
        res.instances.push_back(std::move(ic));
    }
    return res;
}

inline void write_reports_csv(std::ostream& os, const SuiteResult& res) {
    os << "seed,theoremId,lhs,rhs,slack,holds\n";
    char buf[160];
    for (const InstanceChecks& ic : res.instances)
        for (const BoundReport& r : ic.reports) {
            std::snprintf(buf, sizeof(buf), "%llu,%s,%.12g,%.12g,%.12g,%d\n",
                          static_cast<unsigned long long>(ic.seed), r.theorem_id.c_str(), r.lhs,
                          r.rhs, r.slack(), r.holds() ? 1 : 0);
            os << buf;
        }
}

}  // namespace emix::oracle
