#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hjsr/jsr.hpp"
#include "hjsr/rng.hpp"
#include "support/oracles.hpp"

using namespace hjsr;

namespace {

const NonnegMatrix kE12{{0, 1}, {0, 0}};
const NonnegMatrix kE21{{0, 0}, {1, 0}};

MatrixSet random_set(SampleStream& rng, std::size_t dim, std::size_t size) {
    std::vector<NonnegMatrix> elems;
    for (std::size_t k = 0; k < size; ++k) {
        std::vector<double> e(dim * dim);
        for (auto& x : e) x = rng.uniform01();
        elems.emplace_back(dim, std::move(e));
    }
    return MatrixSet(std::move(elems));
}

} // namespace

TEST_CASE("shift pair: lower bound reaches 1 at depth two") {
    const MatrixSet shift({kE12, kE21});
    // brute force over the six words of length <= 2: the largest Perron root
    // among products is r(E12 E21) = 1, reached at depth 2
    const BoundResult lb1 = gsr_lower_bound(shift, {1, 1000, false});
    CHECK(lb1.value == doctest::Approx(0.0).epsilon(1e-12));
    const BoundResult lb2 = gsr_lower_bound(shift, {2, 1000, false});
    CHECK(lb2.value == doctest::Approx(1.0).epsilon(1e-10));
    const BoundResult ub1 = jsr_upper_bound(shift, {1, 1000, false});
    CHECK(ub1.value == doctest::Approx(1.0).epsilon(1e-10));

    const RadiusBracket b = radius_bracket(shift, SetRadiusKind::Generalized, {2, 1000, true});
    CHECK(b.lower == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(b.upper == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_FALSE(b.partial);
}

TEST_CASE("singleton brackets collapse to the Perron root") {
    SampleStream rng(31);
    const MatrixSet single = MatrixSet::singleton(NonnegMatrix{{0, 1}, {4, 0}});
    const RadiusBracket b = radius_bracket(single, SetRadiusKind::Joint, {2, 1000, true});
    CHECK(b.lower == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(b.upper == doctest::Approx(2.0).epsilon(1e-9));

    for (int t = 0; t < 20; ++t) {
        const MatrixSet s = random_set(rng, 3, 1);
        const RadiusBracket sb = radius_bracket(s, SetRadiusKind::Generalized, {8, 200000, true});
        CHECK((sb.upper - sb.lower) <= 1e-6 * sb.upper);
        const double ref = oracles::perron_3x3(s[0]);
        CHECK(sb.lower <= ref * (1 + 1e-9) + 1e-12);
        CHECK(sb.upper >= ref * (1 - 1e-9) - 1e-12);
    }
}

TEST_CASE("norm-of-powers upper bound decreases for the Jordan block") {
    const NonnegMatrix jordan{{1, 1}, {0, 1}};
    const MatrixSet s = MatrixSet::singleton(jordan);
    // sigma_max at depth 1 is the golden ratio
    const BoundResult d1 = jsr_upper_bound(s, {1, 1000, false});
    CHECK(d1.value == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-9));
    double prev = std::numeric_limits<double>::infinity();
    for (int depth = 1; depth <= 8; ++depth) {
        const BoundResult b = jsr_upper_bound(s, {depth, 1000, false});
        CHECK(b.value <= prev * (1 + 1e-12));
        prev = b.value;
    }
    // strictly below the depth-1 bound, still above r = 1
    CHECK(prev < (1.0 + std::sqrt(5.0)) / 2.0 - 0.1);
    CHECK(prev > 1.0);
}

TEST_CASE("scaled identities") {
    const MatrixSet s({scale(2.0, NonnegMatrix::identity(2)), scale(3.0, NonnegMatrix::identity(2))});
    const RadiusBracket b = radius_bracket(s, SetRadiusKind::Generalized, {3, 10000, true});
    CHECK(b.lower == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(b.upper == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("zero matrix set") {
    const RadiusBracket b = radius_bracket(MatrixSet::singleton(NonnegMatrix(2)),
                                           SetRadiusKind::Generalized, {2, 1000, true});
    CHECK(b.lower == 0.0);
    CHECK(b.upper == 0.0);
}

TEST_CASE("bracket ordering and engine-reference agreement on random sets") {
    SampleStream rng(32);
    for (int t = 0; t < 40; ++t) {
        const std::size_t dim = 2 + static_cast<std::size_t>(rng.uniform01() * 3);
        const std::size_t size = 2 + static_cast<std::size_t>(rng.uniform01() * 2);
        const MatrixSet s = random_set(rng, dim, size);
        const EnumerationBudget budget{4, 500000, true};
        const RadiusBracket eng = radius_bracket(s, SetRadiusKind::Generalized, budget);
        const RadiusBracket ref = radius_bracket_reference(s, SetRadiusKind::Generalized, 4);
        CHECK(eng.lower <= eng.upper + 1e-9);
        CHECK(std::abs(eng.lower - ref.lower) <= 1e-12 * std::max(1.0, ref.lower));
        CHECK(std::abs(eng.upper - ref.upper) <= 1e-12 * std::max(1.0, ref.upper));
    }
}

TEST_CASE("pruning does not change the bracket") {
    SampleStream rng(33);
    for (int t = 0; t < 100; ++t) {
        const std::size_t dim = 2 + static_cast<std::size_t>(rng.uniform01() * 3);
        const std::size_t size = 2 + static_cast<std::size_t>(rng.uniform01() * 2);
        const MatrixSet s = random_set(rng, dim, size);
        const RadiusBracket on = radius_bracket(s, SetRadiusKind::Generalized, {5, 500000, true});
        const RadiusBracket off = radius_bracket(s, SetRadiusKind::Generalized, {5, 500000, false});
        CHECK(std::abs(on.lower - off.lower) <= 1e-12 * std::max(1.0, off.lower));
        CHECK(std::abs(on.upper - off.upper) <= 1e-12 * std::max(1.0, off.upper));
    }
}

TEST_CASE("power identity: the squared set bracket sits inside the doubled-depth bracket") {
    SampleStream rng(34);
    for (int t = 0; t < 25; ++t) {
        const MatrixSet s = random_set(rng, 3, 2);
        const MatrixSet sq = set_power(s, 2);
        const RadiusBracket bs = radius_bracket(s, SetRadiusKind::Generalized, {6, 500000, true});
        const RadiusBracket bsq = radius_bracket(sq, SetRadiusKind::Generalized, {3, 500000, true});
        CHECK(bsq.lower * (1 - 1e-9) <= bs.lower * bs.lower + 1e-12);
        CHECK(bsq.upper * (1 + 1e-9) >= bs.upper * bs.upper - 1e-12);
    }
}

TEST_CASE("product commutation: brackets of PQ and QP overlap") {
    SampleStream rng(35);
    for (int t = 0; t < 25; ++t) {
        const MatrixSet p = random_set(rng, 3, 2);
        const MatrixSet q = random_set(rng, 3, 2);
        const RadiusBracket pq =
            radius_bracket(set_product(p, q), SetRadiusKind::Generalized, {4, 500000, true});
        const RadiusBracket qp =
            radius_bracket(set_product(q, p), SetRadiusKind::Generalized, {4, 500000, true});
        CHECK(pq.lower <= qp.upper * (1 + 1e-9));
        CHECK(qp.lower <= pq.upper * (1 + 1e-9));
    }
}

TEST_CASE("bounds are monotone in depth") {
    SampleStream rng(36);
    for (int t = 0; t < 10; ++t) {
        const MatrixSet s = random_set(rng, 3, 2);
        double lower_prev = -1.0, upper_prev = std::numeric_limits<double>::infinity();
        for (int depth = 1; depth <= 5; ++depth) {
            const RadiusBracket b =
                radius_bracket(s, SetRadiusKind::Generalized, {depth, 500000, true});
            CHECK(b.lower >= lower_prev - 1e-12);
            CHECK(b.upper <= upper_prev + 1e-12);
            lower_prev = b.lower;
            upper_prev = b.upper;
        }
    }
}

TEST_CASE("product cap yields a partial but sound bracket") {
    SampleStream rng(37);
    const MatrixSet s = random_set(rng, 2, 3);
    const RadiusBracket full = radius_bracket(s, SetRadiusKind::Generalized, {6, 500000, true});
    const RadiusBracket capped = radius_bracket(s, SetRadiusKind::Generalized, {6, 12, true});
    CHECK(capped.partial);
    CHECK(capped.lower <= full.upper * (1 + 1e-9));
    CHECK(capped.upper >= full.lower * (1 - 1e-9));
    CHECK(capped.lower <= capped.upper + 1e-12);
}

TEST_CASE("comparison semantics") {
    auto mk = [](double lo, double hi) {
        RadiusBracket b;
        b.lower = lo;
        b.upper = hi;
        return b;
    };
    CHECK(compare_rho(mk(1, 1), mk(1, 1), 1e-9) == ComparisonOutcome::Consistent);
    CHECK(compare_rho(mk(2, 2), mk(1, 1), 1e-9) == ComparisonOutcome::Violation);
    CHECK(compare_rho(mk(0.9, 1.5), mk(1.0, 1.2), 1e-9) == ComparisonOutcome::Consistent);
    RadiusBracket joint = mk(1, 1);
    joint.functional = SetRadiusKind::Joint;
    CHECK_THROWS_AS(compare_rho(mk(1, 1), joint, 1e-9), InvalidInput);
}

TEST_CASE("budget validation") {
    const MatrixSet shift({kE12, kE21});
    CHECK_THROWS_AS(radius_bracket(shift, SetRadiusKind::Generalized, {0, 1000, true}),
                    InvalidInput);
    CHECK_THROWS_AS(radius_bracket(shift, SetRadiusKind::Generalized, {2, 1, true}),
                    InvalidInput);
}
