// Synthetic shifted-domain tasks (two moons, Gaussian blobs) and the
// proxy A-distance diagnostic.
#pragma once

#include <cstdint>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "emix/vicinal.hpp"

namespace emix {

struct TaskConfig {
    std::string generator = "two-moons";  // or "gaussian-blobs"
    int k = 2;
    int n_s = 500;
    int n_t = 500;
    double noise = 0.10;
    double rotation_deg = 45.0;
    double translation_x = 0.0;
    double translation_y = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (generator != "two-moons" && generator != "gaussian-blobs")
            throw std::invalid_argument("task: unknown generator '" + generator + "'");
        if (generator == "two-moons" && k != 2)
            throw std::invalid_argument("task: two-moons requires k = 2");
        if (k < 2) throw std::invalid_argument("task: need at least two classes");
        if (n_s < 2 * k || n_t < 2 * k)
            throw std::invalid_argument("task: need at least 2K samples per domain");
        if (rotation_deg < 0.0 || rotation_deg >= 180.0)
            throw std::invalid_argument("task: rotation must lie in [0, 180)");
        if (noise < 0.0) throw std::invalid_argument("task: negative noise");
    }
};

// Source samples carry one-hot labels; target labels live in a separate
// evaluation-only array so no gradient path can reach them.
struct Task {
    int k = 2;
    std::vector<LabeledSample> source;
    std::vector<Vec> target_features;
    std::vector<int> target_labels;
};

namespace detail {

inline std::pair<Vec, int> draw_base_point(const TaskConfig& cfg, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, cfg.noise);
    if (cfg.generator == "two-moons") {
        // Interleaved crescents recentered so the structure straddles the
        // origin; a rotation then pivots the task in place.
        const int cls = std::uniform_int_distribution<int>(0, 1)(rng);
        const double t = std::uniform_real_distribution<double>(0.0, std::numbers::pi)(rng);
        Vec p(2);
        if (cls == 0) {
            p[0] = std::cos(t) - 0.5;
            p[1] = std::sin(t) - 0.25;
        } else {
            p[0] = 0.5 - std::cos(t);
            p[1] = 0.25 - std::sin(t);
        }
        p[0] += gauss(rng);
        p[1] += gauss(rng);
        return {p, cls};
    }
    // Gaussian blobs: class centers on a circle of radius 1.5.
    const int cls = std::uniform_int_distribution<int>(0, cfg.k - 1)(rng);
    const double ang = 2.0 * std::numbers::pi * cls / cfg.k;
    Vec p{1.5 * std::cos(ang) + gauss(rng), 1.5 * std::sin(ang) + gauss(rng)};
    return {p, cls};
}

inline Vec shift_point(const TaskConfig& cfg, const Vec& p) {
    const double th = cfg.rotation_deg * std::numbers::pi / 180.0;
    const double c = std::cos(th), s = std::sin(th);
    return {c * p[0] - s * p[1] + cfg.translation_x, s * p[0] + c * p[1] + cfg.translation_y};
}

}  // namespace detail

inline Task generate(const TaskConfig& cfg) {
    cfg.validate();
    Task task;
    task.k = cfg.k;
    std::mt19937_64 src_rng(seed_mix(cfg.seed, 1));
    for (int i = 0; i < cfg.n_s; ++i) {
        auto [p, cls] = detail::draw_base_point(cfg, src_rng);
        LabeledSample s;
        s.features = std::move(p);
        s.label.assign(cfg.k, 0.0);
        s.label[cls] = 1.0;
        s.origin = Origin::Source;
        task.source.push_back(std::move(s));
    }
    // Target: fresh base draws pushed through the shift; labels ride along
    // but are held out for evaluation.
    std::mt19937_64 tgt_rng(seed_mix(cfg.seed, 2));
    for (int i = 0; i < cfg.n_t; ++i) {
        auto [p, cls] = detail::draw_base_point(cfg, tgt_rng);
        task.target_features.push_back(detail::shift_point(cfg, p));
        task.target_labels.push_back(cls);
    }
    return task;
}

// Proxy A-distance, 2(1 - 2*eps): eps is the held-out error of a linear
// logistic domain classifier trained 200 full-batch gradient steps on a
// 50/50 split.
inline double a_distance(const std::vector<Vec>& domain_a, const std::vector<Vec>& domain_b,
                         std::uint64_t split_seed) {
    if (domain_a.size() < 20 || domain_b.size() < 20)
        throw std::invalid_argument("a_distance: need at least 20 points per domain");
    const std::size_t dim = domain_a[0].size();
    std::mt19937_64 rng(split_seed);

    auto split = [&](const std::vector<Vec>& pts) {
        std::vector<std::size_t> idx(pts.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::shuffle(idx.begin(), idx.end(), rng);
        return idx;
    };
    const std::vector<std::size_t> ia = split(domain_a);
    const std::vector<std::size_t> ib = split(domain_b);

    std::vector<const Vec*> train, test;
    std::vector<double> train_y, test_y;
    auto add = [&](const std::vector<Vec>& pts, const std::vector<std::size_t>& idx, double label) {
        const std::size_t half = pts.size() / 2;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i < half) {
                train.push_back(&pts[idx[i]]);
                train_y.push_back(label);
            } else {
                test.push_back(&pts[idx[i]]);
                test_y.push_back(label);
            }
        }
    };
    add(domain_a, ia, 0.0);
    add(domain_b, ib, 1.0);

    // Standardize with training statistics.
    Vec mean(dim, 0.0), sd(dim, 0.0);
    for (const Vec* p : train)
        for (std::size_t j = 0; j < dim; ++j) mean[j] += (*p)[j];
    for (double& m : mean) m /= static_cast<double>(train.size());
    for (const Vec* p : train)
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = (*p)[j] - mean[j];
            sd[j] += d * d;
        }
    for (double& s : sd) s = std::max(1e-9, std::sqrt(s / static_cast<double>(train.size())));

    Vec w(dim, 0.0);
    double bias = 0.0;
    const double lr = 1.0;
    for (int step = 0; step < 200; ++step) {
        Vec gw(dim, 0.0);
        double gb = 0.0;
        for (std::size_t i = 0; i < train.size(); ++i) {
            double z = bias;
            for (std::size_t j = 0; j < dim; ++j) z += w[j] * ((*train[i])[j] - mean[j]) / sd[j];
            const double p = 1.0 / (1.0 + std::exp(-z));
            const double g = p - train_y[i];
            for (std::size_t j = 0; j < dim; ++j) gw[j] += g * ((*train[i])[j] - mean[j]) / sd[j];
            gb += g;
        }
        for (std::size_t j = 0; j < dim; ++j) w[j] -= lr * gw[j] / static_cast<double>(train.size());
        bias -= lr * gb / static_cast<double>(train.size());
    }

    std::size_t wrong = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        double z = bias;
        for (std::size_t j = 0; j < dim; ++j) z += w[j] * ((*test[i])[j] - mean[j]) / sd[j];
        const double pred = z > 0.0 ? 1.0 : 0.0;
        if (pred != test_y[i]) ++wrong;
    }
    const double eps = static_cast<double>(wrong) / static_cast<double>(test.size());
    const double dist = 2.0 * (1.0 - 2.0 * eps);
    return std::min(2.0, std::max(0.0, dist));
}

// Dataset dump: header row, then x1..xd,label,domain per sample.
inline void write_task_csv(std::ostream& os, const Task& task) {
    const std::size_t dim = task.source.empty() ? 2 : task.source[0].features.size();
    for (std::size_t j = 0; j < dim; ++j) os << "x" << (j + 1) << ",";
    os << "label,domain\n";
    char buf[64];
    auto put = [&](const Vec& x, int label, const char* domain) {
        for (double v : x) {
            std::snprintf(buf, sizeof(buf), "%.12g", v);
            os << buf << ",";
        }
        os << label << "," << domain << "\n";
    };
    for (const LabeledSample& s : task.source) put(s.features, argmax_label(s.label), "source");
    for (std::size_t i = 0; i < task.target_features.size(); ++i)
        put(task.target_features[i], task.target_labels[i], "target");
}

inline Task read_task_csv(std::istream& is, int k) {
    Task task;
    task.k = k;
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("task csv: missing header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 3) throw std::invalid_argument("task csv: short row");
        Vec x;
        for (std::size_t j = 0; j + 2 < cells.size(); ++j) x.push_back(std::stod(cells[j]));
        const int label = std::stoi(cells[cells.size() - 2]);
        const std::string& domain = cells.back();
        if (domain == "source") {
            LabeledSample s;
            s.features = std::move(x);
            s.label.assign(k, 0.0);
            s.label[label] = 1.0;
            s.origin = Origin::Source;
            task.source.push_back(std::move(s));
        } else if (domain == "target") {
            task.target_features.push_back(std::move(x));
            task.target_labels.push_back(label);
        } else {
            throw std::invalid_argument("task csv: unknown domain '" + domain + "'");
        }
    }
    return task;
}

}  // namespace emix
