// The adversarial training loop: one generator, a task classifier, an
// adversarial discriminator head, and a proxy head trained on vicinal
// samples. One simultaneous momentum-SGD update per iteration; the
// generator receives the negated discriminator direction scaled by eta
// (gradient reversal).
#pragma once

#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <string>

#include "emix/mlp.hpp"
#include "emix/risks.hpp"
#include "emix/synthdata.hpp"

namespace emix {

enum class EtaForm { Progressive, Paper };
enum class ProxyLossKind { Mse, CrossEntropy };

struct TrainConfig {
    double gamma = 8.0;
    double eta0 = 0.1;
    double delta = 10.0;
    double l0 = 0.04;
    double lr_scale = 0.25;  // desk-scale factor on the reference base rate
    double beta = 0.75;
    double momentum = 0.9;
    double alpha = 0.6;
    double tau = 0.9;
    int iterations = 2000;
    int batch_size = 64;
    bool use_proxy = true;
    bool pool_source = true;
    bool pool_target = true;
    bool use_mixup = false;
    bool use_emixup = true;
    std::uint64_t seed = 1;
    int eval_interval = 100;
    EtaForm eta_form = EtaForm::Progressive;
    PartnerMode emix_partner = PartnerMode::Different;
    bool proxy_to_g = true;
    ProxyLossKind proxy_loss = ProxyLossKind::Mse;
    int hidden_units = 16;
    int feature_dim = 8;
    bool track_a_distance = true;

    void validate() const {
        if (use_mixup && use_emixup)
            throw std::invalid_argument("config: at most one of use_mixup/use_emixup");
        if ((use_mixup || use_emixup) && !pool_target)
            throw std::invalid_argument("config: mixup variants require pool_target");
        if (tau <= 0.0 || tau > 1.0) throw std::invalid_argument("config: tau out of (0,1]");
        if (iterations < 0 || batch_size < 1 || hidden_units < 1 || feature_dim < 1)
            throw std::invalid_argument("config: bad sizes");
        if (gamma <= 0.0) throw std::invalid_argument("config: gamma must be positive");
        if (momentum < 0.0 || momentum >= 1.0) throw std::invalid_argument("config: momentum");
    }
};

struct IterationMetrics {
    int iteration = 0;
    double source_risk = 0.0;
    double disparity = 0.0;
    double proxy = 0.0;
    double combined_risk = 0.0;
    double target_acc = 0.0;
    double a_distance = std::numeric_limits<double>::quiet_NaN();  // optional column
};

struct ModelBundle {
    MlpParams g, c, d, cstar;
};

struct TrainingReport {
    std::vector<IterationMetrics> metrics;
    ModelBundle bundle;
};

struct TrainingAbort : std::runtime_error {
    explicit TrainingAbort(const std::string& what) : std::runtime_error(what) {}
};

// l0 * (1 + delta*i)^(-beta), i in [0,1].
inline double lr_schedule(double i, double l0, double delta, double beta) {
    return l0 * std::pow(1.0 + delta * i, -beta);
}

// 2*eta0/(1+exp(-delta*i)) - eta0: increases from 0 toward eta0.
inline double eta_schedule(double i, double eta0, double delta) {
    return 2.0 * eta0 / (1.0 + std::exp(-delta * i)) - eta0;
}

// The published form of the schedule (decreasing in i); kept selectable so
// the two variants can be compared empirically.
inline double eta_schedule_paper(double i, double eta0, double delta) {
    return 2.0 * eta0 / (1.0 + std::exp(delta * i) - eta0);
}

inline double eta_at(const TrainConfig& cfg, double i) {
    return cfg.eta_form == EtaForm::Progressive ? eta_schedule(i, cfg.eta0, cfg.delta)
                                                : eta_schedule_paper(i, cfg.eta0, cfg.delta);
}

inline ModelBundle init_bundle(const TrainConfig& cfg, std::size_t input_dim, int k,
                               std::uint64_t seed) {
    const std::size_t h = static_cast<std::size_t>(cfg.hidden_units);
    const std::size_t f = static_cast<std::size_t>(cfg.feature_dim);
    const std::size_t kk = static_cast<std::size_t>(k);
    ModelBundle m;
    m.g = make_mlp({input_dim, h, f}, seed_mix(seed, 11));
    m.c = make_mlp({f, h, kk}, seed_mix(seed, 12));
    m.d = make_mlp({f, h, kk}, seed_mix(seed, 13));
    m.cstar = make_mlp({f, h, kk}, seed_mix(seed, 14));
    return m;
}

inline ScorerFn compose_scorer(const MlpParams& g, const MlpParams& head) {
    return [&g, &head](const Vec& x) { return forward(head, forward(g, x)); };
}

// The discrete choices of one iteration, frozen so the remaining objective
// is a smooth function of the parameters (gradients never flow through an
// argmax, a confidence threshold or a partner draw).
struct StepPlan {
    std::vector<LabeledSample> src;
    std::vector<int> src_class;
    std::vector<Vec> tgt;
    std::vector<int> disp_src_class;  // h'(x) from the classifier head, source side
    std::vector<int> disp_tgt_class;
    std::vector<LabeledSample> mixed;  // second half of the proxy estimator
    std::size_t pool_size = 0;
    bool adversary_active = false;
    bool proxy_active = false;
};

inline StepPlan build_step_plan(const ModelBundle& m, const std::vector<LabeledSample>& src_batch,
                                const std::vector<Vec>& tgt_batch, const TrainConfig& cfg,
                                std::mt19937_64& emix_rng) {
    if (src_batch.empty()) throw std::invalid_argument("train_step: empty source batch");
    StepPlan plan;
    plan.src = src_batch;
    plan.tgt = tgt_batch;
    for (const LabeledSample& s : plan.src) plan.src_class.push_back(argmax_label(s.label));

    const ScorerFn cg = compose_scorer(m.g, m.c);
    plan.adversary_active = cfg.eta0 != 0.0 && !tgt_batch.empty();
    if (plan.adversary_active) {
        for (const LabeledSample& s : plan.src) plan.disp_src_class.push_back(argmax_label(cg(s.features)));
        for (const Vec& x : plan.tgt) plan.disp_tgt_class.push_back(argmax_label(cg(x)));
    }

    plan.proxy_active = cfg.use_proxy;
    if (cfg.use_proxy) {
        const int k = static_cast<int>(plan.src.front().label.size());
        std::vector<LabeledSample> pool;
        if (cfg.pool_source) pool.insert(pool.end(), src_batch.begin(), src_batch.end());
        if (cfg.pool_target && !tgt_batch.empty()) {
            std::vector<LabeledSample> confident = select_confident(tgt_batch, cg, cfg.tau);
            pool.insert(pool.end(), confident.begin(), confident.end());
        }
        plan.pool_size = pool.size();
        if (!pool.empty()) {
            if (cfg.use_emixup)
                plan.mixed = e_mixup(pool, cfg.alpha, k, emix_rng, cfg.emix_partner);
            else if (cfg.use_mixup)
                plan.mixed = mixup_batch(pool, cfg.alpha, emix_rng);
            else
                plan.mixed = std::move(pool);  // the plain pseudo-label estimator
        }
    }
    return plan;
}

// ---- objective values against a frozen plan ----

inline double eval_source_risk(const ModelBundle& m, const StepPlan& plan) {
    double s = 0.0;
    for (std::size_t i = 0; i < plan.src.size(); ++i)
        s += loss_source(forward(m.c, forward(m.g, plan.src[i].features)), plan.src_class[i]);
    return s / static_cast<double>(plan.src.size());
}

inline double eval_disparity(const ModelBundle& m, const StepPlan& plan, double gamma) {
    double src = 0.0;
    for (std::size_t i = 0; i < plan.src.size(); ++i)
        src += loss_source(forward(m.d, forward(m.g, plan.src[i].features)), plan.disp_src_class[i]);
    double tgt = 0.0;
    for (std::size_t i = 0; i < plan.tgt.size(); ++i)
        tgt += loss_target(forward(m.d, forward(m.g, plan.tgt[i])), plan.disp_tgt_class[i]);
    return -gamma * src / static_cast<double>(plan.src.size()) +
           tgt / static_cast<double>(plan.tgt.size());
}

inline double proxy_sample_loss(ProxyLossKind kind, const Vec& scores, const Vec& label) {
    return kind == ProxyLossKind::Mse ? loss_mse(softmax(scores), label)
                                      : loss_ce_soft(scores, label);
}

inline double eval_proxy(const ModelBundle& m, const StepPlan& plan, ProxyLossKind kind) {
    double s = 0.0;
    for (const LabeledSample& smp : plan.src)
        s += proxy_sample_loss(kind, forward(m.cstar, forward(m.g, smp.features)), smp.label);
    s /= static_cast<double>(plan.src.size());
    if (!plan.mixed.empty()) {
        double e = 0.0;
        for (const LabeledSample& smp : plan.mixed)
            e += proxy_sample_loss(kind, forward(m.cstar, forward(m.g, smp.features)), smp.label);
        s += e / static_cast<double>(plan.mixed.size());
    }
    return s;
}

// ---- gradients ----

struct HeadGrads {
    double value = 0.0;
    GradientBuffer head;  // the head the objective belongs to
    GradientBuffer g;     // contribution through the generator
};

inline HeadGrads source_risk_grads(const ModelBundle& m, const StepPlan& plan) {
    HeadGrads out{0.0, make_grad(m.c), make_grad(m.g)};
    const double inv = 1.0 / static_cast<double>(plan.src.size());
    ForwardCache cache_g, cache_h;
    for (std::size_t i = 0; i < plan.src.size(); ++i) {
        const Vec feat = forward(m.g, plan.src[i].features, &cache_g);
        const Vec scores = forward(m.c, feat, &cache_h);
        out.value += loss_source(scores, plan.src_class[i]) * inv;
        Vec adj = loss_source_adjoint(scores, plan.src_class[i]);
        for (double& a : adj) a *= inv;
        const Vec feat_adj = backward(m.c, cache_h, adj, out.head);
        backward(m.g, cache_g, feat_adj, out.g);
    }
    return out;
}

// Gradient of the disparity estimator itself (the discriminator ascends it,
// the generator descends eta times it).
inline HeadGrads disparity_grads(const ModelBundle& m, const StepPlan& plan, double gamma) {
    HeadGrads out{0.0, make_grad(m.d), make_grad(m.g)};
    ForwardCache cache_g, cache_h;
    const double src_w = -gamma / static_cast<double>(plan.src.size());
    for (std::size_t i = 0; i < plan.src.size(); ++i) {
        const Vec feat = forward(m.g, plan.src[i].features, &cache_g);
        const Vec scores = forward(m.d, feat, &cache_h);
        out.value += loss_source(scores, plan.disp_src_class[i]) * src_w;
        Vec adj = loss_source_adjoint(scores, plan.disp_src_class[i]);
        for (double& a : adj) a *= src_w;
        const Vec feat_adj = backward(m.d, cache_h, adj, out.head);
        backward(m.g, cache_g, feat_adj, out.g);
    }
    const double tgt_w = 1.0 / static_cast<double>(plan.tgt.size());
    for (std::size_t i = 0; i < plan.tgt.size(); ++i) {
        const Vec feat = forward(m.g, plan.tgt[i], &cache_g);
        const Vec scores = forward(m.d, feat, &cache_h);
        out.value += loss_target(scores, plan.disp_tgt_class[i]) * tgt_w;
        Vec adj = loss_target_adjoint(scores, plan.disp_tgt_class[i]);
        for (double& a : adj) a *= tgt_w;
        const Vec feat_adj = backward(m.d, cache_h, adj, out.head);
        backward(m.g, cache_g, feat_adj, out.g);
    }
    return out;
}

inline HeadGrads proxy_grads(const ModelBundle& m, const StepPlan& plan, ProxyLossKind kind) {
    HeadGrads out{0.0, make_grad(m.cstar), make_grad(m.g)};
    ForwardCache cache_g, cache_h;
    auto accumulate = [&](const std::vector<LabeledSample>& part, double inv) {
        for (const LabeledSample& smp : part) {
            const Vec feat = forward(m.g, smp.features, &cache_g);
            const Vec scores = forward(m.cstar, feat, &cache_h);
            out.value += proxy_sample_loss(kind, scores, smp.label) * inv;
            Vec adj = kind == ProxyLossKind::Mse ? mse_softmax_adjoint(scores, smp.label)
                                                 : ce_soft_adjoint(scores, smp.label);
            for (double& a : adj) a *= inv;
            const Vec feat_adj = backward(m.cstar, cache_h, adj, out.head);
            backward(m.g, cache_g, feat_adj, out.g);
        }
    };
    accumulate(plan.src, 1.0 / static_cast<double>(plan.src.size()));
    if (!plan.mixed.empty()) accumulate(plan.mixed, 1.0 / static_cast<double>(plan.mixed.size()));
    return out;
}

// ---- optimizer ----

struct OptState {
    GradientBuffer vg, vc, vd, vcstar;
};

inline OptState make_opt_state(const ModelBundle& m) {
    return {make_grad(m.g), make_grad(m.c), make_grad(m.d), make_grad(m.cstar)};
}

inline void axpy(GradientBuffer& dst, double scale, const GradientBuffer& src) {
    for (std::size_t l = 0; l < dst.layers.size(); ++l) {
        for (std::size_t i = 0; i < dst.layers[l].w.data.size(); ++i)
            dst.layers[l].w.data[i] += scale * src.layers[l].w.data[i];
        for (std::size_t i = 0; i < dst.layers[l].b.size(); ++i)
            dst.layers[l].b[i] += scale * src.layers[l].b[i];
    }
}

inline void momentum_update(MlpParams& params, GradientBuffer& velocity,
                            const GradientBuffer& grad, double momentum, double lr) {
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        Layer& v = velocity.layers[l];
        const Layer& g = grad.layers[l];
        Layer& p = params.layers[l];
        for (std::size_t i = 0; i < p.w.data.size(); ++i) {
            v.w.data[i] = momentum * v.w.data[i] + g.w.data[i];
            if (lr != 0.0) p.w.data[i] -= lr * v.w.data[i];
        }
        for (std::size_t i = 0; i < p.b.size(); ++i) {
            v.b[i] = momentum * v.b[i] + g.b[i];
            if (lr != 0.0) p.b[i] -= lr * v.b[i];
        }
    }
}

struct StepResult {
    double source_risk = 0.0;
    double disparity = 0.0;
    double proxy = 0.0;
    double lr = 0.0;
    double eta = 0.0;
};

inline StepResult train_step(ModelBundle& m, OptState& opt,
                             const std::vector<LabeledSample>& src_batch,
                             const std::vector<Vec>& tgt_batch, const TrainConfig& cfg,
                             double progress, std::mt19937_64& emix_rng) {
    const StepPlan plan = build_step_plan(m, src_batch, tgt_batch, cfg, emix_rng);
    StepResult res;
    res.lr = cfg.lr_scale * lr_schedule(progress, cfg.l0, cfg.delta, cfg.beta);
    res.eta = eta_at(cfg, progress);

    HeadGrads sr = source_risk_grads(m, plan);
    res.source_risk = sr.value;
    GradientBuffer grad_g = std::move(sr.g);  // generator descent direction
    GradientBuffer grad_d = make_grad(m.d);
    GradientBuffer grad_cstar = make_grad(m.cstar);

    if (plan.adversary_active) {
        HeadGrads dd = disparity_grads(m, plan, cfg.gamma);
        res.disparity = dd.value;
        axpy(grad_d, -1.0, dd.head);       // ascend the disparity
        axpy(grad_g, res.eta, dd.g);       // reversal: descend eta * disparity
    }
    if (plan.proxy_active) {
        HeadGrads pp = proxy_grads(m, plan, cfg.proxy_loss);
        res.proxy = pp.value;
        grad_cstar = std::move(pp.head);
        if (cfg.proxy_to_g) axpy(grad_g, 1.0, pp.g);
    }

    if (!std::isfinite(res.source_risk) || !std::isfinite(res.disparity) ||
        !std::isfinite(res.proxy)) {
        char buf[256];
        std::snprintf(buf, sizeof(buf),
                      "non-finite objective at progress %.6f: source_risk=%g disparity=%g proxy=%g "
                      "(lr=%g eta=%g pool=%zu)",
                      progress, res.source_risk, res.disparity, res.proxy, res.lr, res.eta,
                      plan.pool_size);
        throw TrainingAbort(buf);
    }

    momentum_update(m.g, opt.vg, grad_g, cfg.momentum, res.lr);
    momentum_update(m.c, opt.vc, sr.head, cfg.momentum, res.lr);
    momentum_update(m.d, opt.vd, grad_d, cfg.momentum, res.lr);
    momentum_update(m.cstar, opt.vcstar, grad_cstar, cfg.momentum, res.lr);
    return res;
}

inline double evaluate(const ModelBundle& m, const Task& task) {
    if (task.target_features.empty()) throw std::invalid_argument("evaluate: no target samples");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < task.target_features.size(); ++i)
        if (argmax_label(forward(m.c, forward(m.g, task.target_features[i]))) ==
            task.target_labels[i])
            ++hits;
    return static_cast<double>(hits) / static_cast<double>(task.target_features.size());
}

// Full-dataset metric row. The proxy column always reports the bounded-MSE
// estimator over the union pool with e-mixup (the estimator being studied),
// independent of which variant is training.
inline IterationMetrics evaluate_metrics(const ModelBundle& m, const Task& task,
                                         const TrainConfig& cfg, int iteration) {
    IterationMetrics row;
    row.iteration = iteration;
    const ScorerFn cg = compose_scorer(m.g, m.c);
    const ScorerFn dg = compose_scorer(m.g, m.d);
    const ScorerFn sg = compose_scorer(m.g, m.cstar);

    row.source_risk = empirical_source_risk(task.source, cg);
    row.disparity = empirical_disparity(task.source, task.target_features, cg, dg, cfg.gamma);

    std::vector<LabeledSample> pool = task.source;
    std::vector<LabeledSample> confident = select_confident(task.target_features, cg, cfg.tau);
    pool.insert(pool.end(), confident.begin(), confident.end());
    std::mt19937_64 eval_rng(seed_mix(cfg.seed, 0xE7A1u + static_cast<std::uint64_t>(iteration)));
    const std::vector<LabeledSample> mixed =
        e_mixup(pool, cfg.alpha, task.k, eval_rng, cfg.emix_partner);
    row.proxy = proxy_combined_risk(task.source, mixed, sg);

    row.combined_risk =
        oracle_combined_risk(task.source, task.target_features, task.target_labels, cg);
    row.target_acc = evaluate(m, task);

    if (cfg.track_a_distance) {
        std::vector<Vec> fs, ft;
        fs.reserve(task.source.size());
        ft.reserve(task.target_features.size());
        for (const LabeledSample& s : task.source) fs.push_back(forward(m.g, s.features));
        for (const Vec& x : task.target_features) ft.push_back(forward(m.g, x));
        row.a_distance =
            a_distance(fs, ft, seed_mix(cfg.seed, 0xAD15u + static_cast<std::uint64_t>(iteration)));
    }
    return row;
}

// Reshuffling mini-batch cursor; drops ragged tails at epoch boundaries.
class MiniBatcher {
  public:
    MiniBatcher(std::size_t n, std::size_t batch, std::uint64_t seed)
        : n_(n), batch_(std::min(batch, n)), rng_(seed), order_(n) {
        for (std::size_t i = 0; i < n; ++i) order_[i] = i;
        reshuffle();
    }

    const std::vector<std::size_t>& next() {
        if (pos_ + batch_ > n_) reshuffle();
        current_.assign(order_.begin() + pos_, order_.begin() + pos_ + batch_);
        pos_ += batch_;
        return current_;
    }

  private:
    void reshuffle() {
        std::shuffle(order_.begin(), order_.end(), rng_);
        pos_ = 0;
    }
    std::size_t n_, batch_, pos_ = 0;
    std::mt19937_64 rng_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> current_;
};

inline TrainingReport train(const TrainConfig& cfg, const Task& task) {
    cfg.validate();
    if (task.source.empty() || task.target_features.empty())
        throw std::invalid_argument("train: empty task");
    if (cfg.tau <= 1.0 / static_cast<double>(task.k))
        throw std::invalid_argument("train: tau must exceed 1/K");

    TrainingReport report;
    report.bundle = init_bundle(cfg, task.source[0].features.size(), task.k, seed_mix(cfg.seed, 1));
    OptState opt = make_opt_state(report.bundle);
    MiniBatcher src_batcher(task.source.size(), cfg.batch_size, seed_mix(cfg.seed, 2));
    MiniBatcher tgt_batcher(task.target_features.size(), cfg.batch_size, seed_mix(cfg.seed, 3));
    std::mt19937_64 emix_rng(seed_mix(cfg.seed, 4));

    report.metrics.push_back(evaluate_metrics(report.bundle, task, cfg, 0));
    const int t_total = cfg.iterations;
    for (int j = 0; j < t_total; ++j) {
        const double progress = static_cast<double>(j) / std::max(1.0, static_cast<double>(t_total));
        std::vector<LabeledSample> src_batch;
        for (std::size_t idx : src_batcher.next()) src_batch.push_back(task.source[idx]);
        std::vector<Vec> tgt_batch;
        for (std::size_t idx : tgt_batcher.next()) tgt_batch.push_back(task.target_features[idx]);
        train_step(report.bundle, opt, src_batch, tgt_batch, cfg, progress, emix_rng);

        const int iter = j + 1;
        if ((cfg.eval_interval > 0 && iter % cfg.eval_interval == 0) || iter == t_total)
            if (report.metrics.back().iteration != iter)
                report.metrics.push_back(evaluate_metrics(report.bundle, task, cfg, iter));
    }
    return report;
}

// ---- ablation variants ----

inline const std::vector<std::string>& ablation_variants() {
    static const std::vector<std::string> v{"none", "t", "tm", "stm", "ste"};
    return v;
}

inline TrainConfig apply_variant(TrainConfig cfg, const std::string& variant) {
    cfg.use_proxy = true;
    cfg.pool_source = false;
    cfg.pool_target = false;
    cfg.use_mixup = false;
    cfg.use_emixup = false;
    if (variant == "none") {
        cfg.use_proxy = false;
    } else if (variant == "t") {
        cfg.pool_target = true;
    } else if (variant == "tm") {
        cfg.pool_target = true;
        cfg.use_mixup = true;
    } else if (variant == "stm") {
        cfg.pool_source = true;
        cfg.pool_target = true;
        cfg.use_mixup = true;
    } else if (variant == "ste") {
        cfg.pool_source = true;
        cfg.pool_target = true;
        cfg.use_emixup = true;
    } else {
        throw std::invalid_argument("unknown variant '" + variant + "'");
    }
    return cfg;
}

struct AblationRow {
    std::string variant;
    std::uint64_t seed = 0;
    double final_acc = 0.0;
    double final_combined = 0.0;
    std::vector<IterationMetrics> metrics;
};

// All five rows on shared seeds; seed r shifts both the task draw and the
// training stream.
inline std::vector<AblationRow> run_ablation(const TrainConfig& base, const TaskConfig& task_base,
                                             int num_seeds) {
    std::vector<AblationRow> rows;
    for (int r = 0; r < num_seeds; ++r) {
        TaskConfig tc = task_base;
        tc.seed = task_base.seed + static_cast<std::uint64_t>(r);
        const Task task = generate(tc);
        for (const std::string& variant : ablation_variants()) {
            TrainConfig cfg = apply_variant(base, variant);
            cfg.seed = base.seed + static_cast<std::uint64_t>(r);
            TrainingReport rep = train(cfg, task);
            AblationRow row;
            row.variant = variant;
            row.seed = cfg.seed;
            row.final_acc = rep.metrics.back().target_acc;
            row.final_combined = rep.metrics.back().combined_risk;
            row.metrics = std::move(rep.metrics);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

// Flat text dump: one line per parameter tensor, dimensions first, then
// row-major values. Order: generator, classifier, discriminator, proxy head.
inline void write_model(std::ostream& os, const ModelBundle& m) {
    char buf[32];
    auto put_mat = [&](const Mat& w) {
        os << "2 " << w.rows << " " << w.cols;
        for (double v : w.data) {
            std::snprintf(buf, sizeof(buf), " %.17g", v);
            os << buf;
        }
        os << "\n";
    };
    auto put_vec = [&](const Vec& b) {
        os << "1 " << b.size();
        for (double v : b) {
            std::snprintf(buf, sizeof(buf), " %.17g", v);
            os << buf;
        }
        os << "\n";
    };
    for (const MlpParams* p : {&m.g, &m.c, &m.d, &m.cstar})
        for (const Layer& l : p->layers) {
            put_mat(l.w);
            put_vec(l.b);
        }
}

}  // namespace emix
