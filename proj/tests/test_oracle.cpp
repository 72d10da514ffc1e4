#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "emix/oracle.hpp"

using namespace emix;
using namespace emix::oracle;
using Catch::Approx;

namespace {

// Two identical domains on 2 points, with a hypothesis list containing a
// perfect classifier (index 0) and a constant one (index 1).
FiniteInstance identical_domains() {
    FiniteInstance inst;
    inst.num_classes = 2;
    inst.feature_points = {{0.0, 0.0}, {1.0, 0.0}};
    inst.source_joint = {{0.4, 0.1}, {0.1, 0.4}};
    inst.target_joint = inst.source_joint;
    inst.hypotheses.push_back({{2.0, 0.0}, {0.0, 2.0}});  // matches the majority label
    inst.hypotheses.push_back({{1.0, 0.0}, {1.0, 0.0}});  // constant class 0
    inst.transformations.push_back({0, 1});               // identity
    inst.validate();
    return inst;
}

}  // namespace

TEST_CASE("exact_risk: perfect, constant-uniform, and hand-summed cases") {
    // Perfect under zero-one: all mass on the argmax class.
    std::vector<Vec> joint{{0.5, 0.0}, {0.0, 0.5}};
    ScoreTable perfect{{3.0, 0.0}, {0.0, 3.0}};
    CHECK(exact_risk(joint, perfect, PairLoss::ZeroOne) == Approx(0.0));

    // Constant hypothesis, uniform labels: zero-one risk 1/2.
    std::vector<Vec> uniform{{0.25, 0.25}, {0.25, 0.25}};
    ScoreTable constant{{1.0, 0.0}, {1.0, 0.0}};
    CHECK(exact_risk(uniform, constant, PairLoss::ZeroOne) == Approx(0.5));

    // 3-point instance, summed by hand: 0.1 + 0.25 + 0.3.
    std::vector<Vec> three{{0.2, 0.1}, {0.25, 0.05}, {0.1, 0.3}};
    ScoreTable h{{1.0, 0.0}, {0.0, 1.0}, {2.0, 1.0}};
    CHECK(exact_risk(three, h, PairLoss::ZeroOne) == Approx(0.65));
}

TEST_CASE("discrepancy_distance: identical marginals and singleton lists give 0") {
    const FiniteInstance inst = identical_domains();
    CHECK(discrepancy_distance(inst, kIdentityTransform, PairLoss::ZeroOne) == Approx(0.0));

    FiniteInstance solo = inst;
    solo.hypotheses.resize(1);
    CHECK(discrepancy_distance(solo, kIdentityTransform, PairLoss::ZeroOne) == Approx(0.0));
}

TEST_CASE("discrepancy_distance: matches an exhaustive double loop") {
    const FiniteInstance inst = random_instance(404);
    // Independent recomputation: marginals first, then all ordered pairs.
    const std::size_t m = inst.num_points();
    Vec ps(m, 0.0), pt(m, 0.0);
    for (std::size_t x = 0; x < m; ++x)
        for (int y = 0; y < inst.num_classes; ++y) {
            ps[x] += inst.source_joint[x][y];
            pt[x] += inst.target_joint[x][y];
        }
    double best = 0.0;
    for (std::size_t a = 0; a < inst.hypotheses.size(); ++a)
        for (std::size_t b = 0; b < inst.hypotheses.size(); ++b) {
            double rs = 0.0, rt = 0.0;
            for (std::size_t x = 0; x < m; ++x) {
                const int ca = argmax_label(inst.hypotheses[a][x]);
                const int cb = argmax_label(inst.hypotheses[b][x]);
                const double l = ca == cb ? 0.0 : 1.0;
                rs += ps[x] * l;
                rt += pt[x] * l;
            }
            best = std::max(best, std::abs(rs - rt));
        }
    CHECK(discrepancy_distance(inst, kIdentityTransform, PairLoss::ZeroOne) ==
          Approx(best).margin(1e-12));
}

TEST_CASE("disparity_discrepancy: zero on identical marginals, below the pair supremum") {
    const FiniteInstance inst = identical_domains();
    CHECK(disparity_discrepancy(inst, 0, kIdentityTransform, PairLoss::ZeroOne,
                                PairLoss::ZeroOne) == Approx(0.0));

    for (std::uint64_t seed : {7u, 8u, 9u}) {
        const FiniteInstance r = random_instance(seed);
        const double d_pair = discrepancy_distance(r, kIdentityTransform, PairLoss::ZeroOne);
        for (int c = 0; c < static_cast<int>(r.hypotheses.size()); ++c) {
            const double d_single = disparity_discrepancy(r, c, kIdentityTransform,
                                                          PairLoss::ZeroOne, PairLoss::ZeroOne);
            CHECK(d_single <= d_pair + 1e-12);
        }
    }
    CHECK_THROWS_AS(
        disparity_discrepancy(inst, 99, kIdentityTransform, PairLoss::ZeroOne, PairLoss::ZeroOne),
        std::invalid_argument);
}

TEST_CASE("disparity_discrepancy: matches independent enumeration over the free index") {
    const FiniteInstance inst = random_instance(505);
    const int c = 2;
    double best = -1e300;
    for (std::size_t cp = 0; cp < inst.hypotheses.size(); ++cp) {
        double rt = 0.0, rs = 0.0;
        for (std::size_t x = 0; x < inst.num_points(); ++x) {
            double pxs = 0.0, pxt = 0.0;
            for (int y = 0; y < inst.num_classes; ++y) {
                pxs += inst.source_joint[x][y];
                pxt += inst.target_joint[x][y];
            }
            const int cc = argmax_label(inst.hypotheses[c][x]);
            const int ccp = argmax_label(inst.hypotheses[cp][x]);
            const double l = cc == ccp ? 0.0 : 1.0;
            rt += pxt * l;
            rs += pxs * l;
        }
        best = std::max(best, rt - rs);
    }
    CHECK(disparity_discrepancy(inst, c, kIdentityTransform, PairLoss::ZeroOne,
                                PairLoss::ZeroOne) == Approx(best).margin(1e-12));
}

TEST_CASE("lambda_combined: perfect hypothesis, singleton list, enumeration") {
    const FiniteInstance inst = identical_domains();
    const auto [lam, wit] = lambda_combined(inst, kIdentityTransform, PairLoss::ZeroOne);
    // Hypothesis 0 errs on the 0.1 off-diagonal mass in each domain.
    CHECK(lam == Approx(0.4));
    CHECK(wit == 0);

    FiniteInstance perfect = inst;
    perfect.source_joint = {{0.5, 0.0}, {0.0, 0.5}};
    perfect.target_joint = perfect.source_joint;
    CHECK(lambda_combined(perfect, kIdentityTransform, PairLoss::ZeroOne).first == Approx(0.0));

    FiniteInstance solo = inst;
    solo.hypotheses = {inst.hypotheses[1]};
    const double expect = domain_risk(solo, false, 0, kIdentityTransform, PairLoss::ZeroOne) +
                          domain_risk(solo, true, 0, kIdentityTransform, PairLoss::ZeroOne);
    CHECK(lambda_combined(solo, kIdentityTransform, PairLoss::ZeroOne).first == Approx(expect));

    const FiniteInstance r = random_instance(606);
    double best = 1e300;
    for (std::size_t h = 0; h < r.hypotheses.size(); ++h)
        best = std::min(best, domain_risk(r, false, static_cast<int>(h), 0, PairLoss::ZeroOne) +
                                  domain_risk(r, true, static_cast<int>(h), 0, PairLoss::ZeroOne));
    CHECK(lambda_combined(r, 0, PairLoss::ZeroOne).first == Approx(best).margin(1e-12));
    CHECK(best >= 0.0);
}

TEST_CASE("check_theorem2: identical domains leave slack equal to lambda") {
    FiniteInstance perfect = identical_domains();
    perfect.source_joint = {{0.5, 0.0}, {0.0, 0.5}};
    perfect.target_joint = perfect.source_joint;
    const BoundReport zero = check_theorem2(perfect, kIdentityTransform, 0, PairLoss::ZeroOne);
    CHECK(zero.lhs == Approx(0.0));
    CHECK(zero.rhs == Approx(0.0).margin(1e-12));
    CHECK(zero.holds());

    const FiniteInstance inst = identical_domains();
    const double lam = lambda_combined(inst, kIdentityTransform, PairLoss::ZeroOne).first;
    for (int c = 0; c < static_cast<int>(inst.hypotheses.size()); ++c) {
        const BoundReport r = check_theorem2(inst, kIdentityTransform, c, PairLoss::ZeroOne);
        CHECK(r.slack() == Approx(lam).margin(1e-12));
        CHECK(r.holds());
    }
}

TEST_CASE("check_theorem3: singleton hypothesis list satisfies both inequalities") {
    FiniteInstance solo = identical_domains();
    solo.hypotheses.resize(1);
    const auto [lower, upper] = check_theorem3(solo, kIdentityTransform, PairLoss::ZeroOne);
    CHECK(lower.holds());
    CHECK(upper.holds());
    // With one hypothesis: middle = delta = lambda, so both sides are equalities
    // up to the discrepancy term.
    CHECK(lower.lhs == Approx(lower.rhs).margin(1e-12));
}

TEST_CASE("check_theorem4: identical domains with a perfect classifier") {
    FiniteInstance perfect = identical_domains();
    perfect.source_joint = {{0.5, 0.0}, {0.0, 0.5}};
    perfect.target_joint = perfect.source_joint;
    const BoundReport r =
        check_theorem4(perfect, kIdentityTransform, 0, PairLoss::ZeroOne, PairLoss::ZeroOne);
    CHECK(r.applicable);
    CHECK(r.lhs == Approx(0.0));
    CHECK(r.holds());
}

TEST_CASE("bound suite: theorems hold on seeded random instances") {
    const SuiteResult res = run_bound_suite(100, 12345);
    CHECK(res.violations == 0);
    CHECK(res.theorems_held() == 4);
    // The double-loss bound should be strictly tighter somewhere.
    CHECK(res.tighter_count > 0);
    for (const InstanceChecks& ic : res.instances) {
        REQUIRE(ic.reports.size() == 5);
        CHECK(ic.rhs_t4 <= ic.rhs_t2 + 1e-12);
    }
}

TEST_CASE("check_theorem4: weaker-condition gate for non-metric loss pairs") {
    // The cross-entropy pair violates the weaker condition on random
    // instances, so the report is marked inapplicable rather than failed.
    for (std::uint64_t seed : {0u, 1u, 2u, 3u}) {
        const FiniteInstance inst = random_instance(seed);
        const BoundReport r =
            check_theorem4(inst, 0, 0, PairLoss::SourceCE, PairLoss::TargetModCE);
        CHECK_FALSE(r.applicable);
        CHECK(r.witnesses == "weaker-condition-failed");
    }
    // A metric pair stays applicable and the bound holds.
    for (std::uint64_t seed : {0u, 1u, 2u, 3u}) {
        const FiniteInstance inst = random_instance(seed);
        const BoundReport r = check_theorem4(inst, 0, 0, PairLoss::AbsDiff, PairLoss::AbsDiff);
        CHECK(r.applicable);
        CHECK(r.holds());
    }
}

TEST_CASE("check_triangle: metric losses pass, the modified cross-entropy fails") {
    const FiniteInstance inst = random_instance(777);
    CHECK(check_triangle(PairLoss::ZeroOne, inst));
    CHECK(check_triangle(PairLoss::AbsDiff, inst));
    std::string cex;
    CHECK_FALSE(check_triangle(PairLoss::TargetModCE, inst, &cex));
    CHECK_FALSE(cex.empty());
}

TEST_CASE("bound reports: CSV schema") {
    const SuiteResult res = run_bound_suite(3, 1);
    std::ostringstream os;
    write_reports_csv(os, res);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "seed,theoremId,lhs,rhs,slack,holds");
    int rows = 0;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3 * 5);  // T1, T2, T3L, T3U, T4 per instance
}

TEST_CASE("instance invariants across random draws") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const FiniteInstance inst = random_instance(seed);
        CHECK(inst.num_points() >= 2);
        CHECK(inst.num_points() <= 6);
        CHECK(inst.num_classes >= 2);
        CHECK(inst.num_classes <= 3);
        CHECK(inst.hypotheses.size() <= 50);
        CHECK(inst.transformations.size() <= 4);
        // d(P,P) = 0 when both marginals are the source marginal.
        FiniteInstance same = inst;
        same.target_joint = same.source_joint;
        CHECK(discrepancy_distance(same, 0, PairLoss::ZeroOne) == Approx(0.0).margin(1e-15));
        CHECK(lambda_combined(inst, 0, PairLoss::ZeroOne).first >= 0.0);
    }
}
