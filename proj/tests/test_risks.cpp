#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "emix/mlp.hpp"
#include "emix/risks.hpp"

using namespace emix;
using Catch::Approx;

namespace {

LabeledSample hard_sample(Vec x, int cls, int k, Origin origin = Origin::Source) {
    LabeledSample s;
    s.features = std::move(x);
    s.label.assign(k, 0.0);
    s.label[cls] = 1.0;
    s.origin = origin;
    return s;
}

std::vector<LabeledSample> random_batch(int n, int k, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::uniform_int_distribution<int> c(0, k - 1);
    std::vector<LabeledSample> out;
    for (int i = 0; i < n; ++i) out.push_back(hard_sample({u(gen), u(gen)}, c(gen), k));
    return out;
}

}  // namespace

TEST_CASE("empirical_source_risk: saturated, uniform, and two-sample cases") {
    const int k = 2;
    std::vector<LabeledSample> batch;
    for (int i = 0; i < 5; ++i) batch.push_back(hard_sample({double(i)}, i % 2, k));

    // Correct class at +10 vs -10 on every sample.
    const ScorerFn correct = [&](const Vec& x) {
        const int cls = static_cast<int>(x[0]) % 2;
        Vec s(k, -10.0);
        s[cls] = 10.0;
        return s;
    };
    CHECK(empirical_source_risk(batch, correct) == Approx(std::log1p(std::exp(-20.0))).epsilon(1e-6));

    const ScorerFn zeros = [&](const Vec&) { return Vec(k, 0.0); };
    CHECK(empirical_source_risk(batch, zeros) == Approx(std::log(2.0)));

    // One sample at uniform softmax (ln 2), one at zero loss.
    std::vector<LabeledSample> two{hard_sample({0.0}, 0, k), hard_sample({1.0}, 0, k)};
    const ScorerFn split = [](const Vec& x) {
        return x[0] < 0.5 ? Vec{0.0, 0.0} : Vec{60.0, -60.0};
    };
    CHECK(empirical_source_risk(two, split) == Approx(std::log(2.0) / 2.0).margin(1e-12));

    CHECK_THROWS_AS(empirical_source_risk({}, zeros), std::invalid_argument);
}

TEST_CASE("empirical_disparity: agreeing zero-score heads at gamma 2") {
    const std::vector<LabeledSample> src = random_batch(6, 2, 1);
    std::vector<Vec> tgt;
    for (int i = 0; i < 4; ++i) tgt.push_back({double(i)});
    const ScorerFn zeros = [](const Vec&) { return Vec{0.0, 0.0}; };
    // -gamma*ln2 + log(1-1/2) = -2 ln2 - ln2 = -3 ln2.
    CHECK(empirical_disparity(src, tgt, zeros, zeros, 2.0) == Approx(-3.0 * std::log(2.0)));
}

TEST_CASE("empirical_disparity: saturation reaches the supremum regime near 0") {
    const std::vector<LabeledSample> src = random_batch(6, 2, 2);
    std::vector<Vec> tgt;
    for (int i = 0; i < 6; ++i) tgt.push_back({double(i) + 100.0});
    // C picks class 0 everywhere; D agrees at saturation on source inputs
    // (x < 50) and disagrees at saturation on target inputs.
    const ScorerFn head_c = [](const Vec&) { return Vec{5.0, 0.0}; };
    const ScorerFn head_d = [](const Vec& x) {
        return x[0] < 50.0 ? Vec{40.0, -40.0} : Vec{-40.0, 40.0};
    };
    CHECK(empirical_disparity(src, tgt, head_c, head_d, 2.0) == Approx(0.0).margin(1e-9));
}

TEST_CASE("empirical_disparity: matches a term-by-term independent summation") {
    const std::vector<LabeledSample> src = random_batch(8, 3, 3);
    std::vector<Vec> tgt;
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 8; ++i) tgt.push_back({u(gen), u(gen)});

    MlpParams net_c = make_mlp({2, 4, 3}, 50);
    MlpParams net_d = make_mlp({2, 4, 3}, 51);
    const ScorerFn head_c = [&](const Vec& x) { return forward(net_c, x); };
    const ScorerFn head_d = [&](const Vec& x) { return forward(net_d, x); };
    const double gamma = 4.0;

    // Straight-line re-evaluation with explicit softmax arithmetic.
    double src_sum = 0.0;
    for (const LabeledSample& s : src) {
        const Vec pc = softmax(head_c(s.features));
        int h = 0;
        for (int i = 1; i < 3; ++i)
            if (pc[i] > pc[h]) h = i;
        src_sum += -std::log(softmax(head_d(s.features))[h]);
    }
    double tgt_sum = 0.0;
    for (const Vec& x : tgt) {
        const Vec pc = softmax(head_c(x));
        int h = 0;
        for (int i = 1; i < 3; ++i)
            if (pc[i] > pc[h]) h = i;
        const double one_minus = 1.0 - softmax(head_d(x))[h];
        tgt_sum += std::log(std::max(one_minus, 1e-12));
    }
    const double expect = -gamma * src_sum / 8.0 + tgt_sum / 8.0;
    CHECK(empirical_disparity(src, tgt, head_c, head_d, gamma) == Approx(expect).margin(1e-9));
}

TEST_CASE("empirical_disparity: antitone in gamma when the source term is positive") {
    const std::vector<LabeledSample> src = random_batch(8, 2, 5);
    std::vector<Vec> tgt;
    for (int i = 0; i < 8; ++i) tgt.push_back({double(i) * 0.1, double(i) * 0.2});
    MlpParams net_c = make_mlp({2, 4, 2}, 52);
    MlpParams net_d = make_mlp({2, 4, 2}, 53);
    const ScorerFn head_c = [&](const Vec& x) { return forward(net_c, x); };
    const ScorerFn head_d = [&](const Vec& x) { return forward(net_d, x); };
    double prev = empirical_disparity(src, tgt, head_c, head_d, 2.0);
    for (double gamma : {4.0, 8.0, 16.0}) {
        const double cur = empirical_disparity(src, tgt, head_c, head_d, gamma);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("proxy_combined_risk: exact labels, uniform head, straight-line oracle") {
    const int k = 2;
    std::vector<LabeledSample> src{hard_sample({10.0, 0.0}, 0, k), hard_sample({0.0, 10.0}, 1, k)};
    std::vector<LabeledSample> emix = src;

    // A head reproducing every label at saturation.
    const ScorerFn exact = [](const Vec& x) { return Vec{4.0 * x[0], 4.0 * x[1]}; };
    CHECK(proxy_combined_risk(src, emix, exact) == Approx(0.0).margin(1e-9));

    const ScorerFn uniform = [](const Vec&) { return Vec{0.0, 0.0}; };
    CHECK(proxy_combined_risk(src, emix, uniform) == Approx(0.5));

    // Random case against an independent summation.
    const std::vector<LabeledSample> src_r = random_batch(8, 2, 6);
    std::vector<LabeledSample> emix_r = random_batch(5, 2, 7);
    for (LabeledSample& s : emix_r) {
        s.origin = Origin::Mixed;
        s.label = {0.6, 0.4};
    }
    MlpParams net = make_mlp({2, 4, 2}, 54);
    const ScorerFn head = [&](const Vec& x) { return forward(net, x); };
    double expect = 0.0;
    for (const LabeledSample& s : src_r) {
        const Vec p = softmax(head(s.features));
        expect += ((p[0] - s.label[0]) * (p[0] - s.label[0]) +
                   (p[1] - s.label[1]) * (p[1] - s.label[1])) /
                  2.0 / 8.0;
    }
    for (const LabeledSample& s : emix_r) {
        const Vec p = softmax(head(s.features));
        expect += ((p[0] - s.label[0]) * (p[0] - s.label[0]) +
                   (p[1] - s.label[1]) * (p[1] - s.label[1])) /
                  2.0 / 5.0;
    }
    CHECK(proxy_combined_risk(src_r, emix_r, head) == Approx(expect).margin(1e-12));
    CHECK(proxy_combined_risk(src_r, emix_r, head) <= 4.0 / k + 1e-12);
}

TEST_CASE("oracle_combined_risk: perfect, uniform, and random-scorer cases") {
    const int k = 2;
    std::vector<LabeledSample> src{hard_sample({-1.0}, 0, k), hard_sample({-2.0}, 0, k)};
    std::vector<Vec> tgt{{1.0}, {2.0}, {3.0}};
    std::vector<int> tgt_labels{1, 1, 1};

    const ScorerFn perfect = [](const Vec& x) {
        return x[0] < 0.0 ? Vec{50.0, -50.0} : Vec{-50.0, 50.0};
    };
    CHECK(oracle_combined_risk(src, tgt, tgt_labels, perfect) == Approx(0.0).margin(1e-9));

    const ScorerFn uniform = [](const Vec&) { return Vec{0.0, 0.0}; };
    CHECK(oracle_combined_risk(src, tgt, tgt_labels, uniform) == Approx(2.0 * std::log(2.0)));

    MlpParams net = make_mlp({1, 4, 2}, 55);
    const ScorerFn head = [&](const Vec& x) { return forward(net, x); };
    double expect = 0.0;
    for (const LabeledSample& s : src) expect += -std::log(softmax(head(s.features))[0]) / 2.0;
    for (std::size_t i = 0; i < tgt.size(); ++i)
        expect += -std::log(softmax(head(tgt[i]))[tgt_labels[i]]) / 3.0;
    CHECK(oracle_combined_risk(src, tgt, tgt_labels, head) == Approx(expect).margin(1e-12));

    // The asymmetric variant swaps the target half to the modified loss.
    double expect_dl = 0.0;
    for (const LabeledSample& s : src) expect_dl += -std::log(softmax(head(s.features))[0]) / 2.0;
    for (std::size_t i = 0; i < tgt.size(); ++i)
        expect_dl +=
            std::log(std::max(1.0 - softmax(head(tgt[i]))[tgt_labels[i]], 1e-12)) / 3.0;
    CHECK(oracle_combined_risk_double_loss(src, tgt, tgt_labels, head) ==
          Approx(expect_dl).margin(1e-12));
}

TEST_CASE("estimators: permutation and duplication invariance") {
    std::vector<LabeledSample> src = random_batch(8, 2, 8);
    std::vector<Vec> tgt;
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 6; ++i) tgt.push_back({u(gen), u(gen)});
    std::vector<int> tgt_labels{0, 1, 0, 1, 0, 1};

    MlpParams net_c = make_mlp({2, 4, 2}, 60);
    MlpParams net_d = make_mlp({2, 4, 2}, 61);
    const ScorerFn head_c = [&](const Vec& x) { return forward(net_c, x); };
    const ScorerFn head_d = [&](const Vec& x) { return forward(net_d, x); };

    const double base_risk = empirical_source_risk(src, head_c);
    const double base_disp = empirical_disparity(src, tgt, head_c, head_d, 4.0);
    const double base_comb = oracle_combined_risk(src, tgt, tgt_labels, head_c);

    std::vector<LabeledSample> shuffled = src;
    std::mt19937_64 perm(10);
    std::shuffle(shuffled.begin(), shuffled.end(), perm);
    CHECK(empirical_source_risk(shuffled, head_c) == Approx(base_risk).margin(1e-12));

    std::vector<LabeledSample> doubled = src;
    doubled.insert(doubled.end(), src.begin(), src.end());
    std::vector<Vec> tgt_doubled = tgt;
    tgt_doubled.insert(tgt_doubled.end(), tgt.begin(), tgt.end());
    std::vector<int> labels_doubled = tgt_labels;
    labels_doubled.insert(labels_doubled.end(), tgt_labels.begin(), tgt_labels.end());

    CHECK(empirical_source_risk(doubled, head_c) == Approx(base_risk).margin(1e-12));
    CHECK(empirical_disparity(doubled, tgt_doubled, head_c, head_d, 4.0) ==
          Approx(base_disp).margin(1e-12));
    CHECK(oracle_combined_risk(doubled, tgt_doubled, labels_doubled, head_c) ==
          Approx(base_comb).margin(1e-12));
}
