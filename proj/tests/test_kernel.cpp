#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hjsr/kernel.hpp"

using namespace hjsr;

namespace {

// Closed-form L2 norm of the weighted symmetrization of exp(c(x-y)) on
// [0,1]^2: the symmetrized kernel is rank one with exponent beta = 2c(2a-1),
// so the norm is ||u|| ||v|| with elementary integrals.
double exp_diff_sym_norm(double c, double alpha) {
    const double beta = 2.0 * c * (2.0 * alpha - 1.0);
    if (std::abs(beta) < 1e-12) return 1.0;
    const double up = std::expm1(beta) / beta;
    const double down = -std::expm1(-beta) / beta;
    return std::sqrt(up * down);
}

} // namespace

TEST_CASE("kernel spec parsing and validation") {
    CHECK(KernelSpec::make("constant", {}).name() == "constant(1.000000)");
    CHECK_THROWS_AS(KernelSpec::make("constant", std::vector<double>{-1.0}), InvalidInput);
    CHECK_THROWS_AS(KernelSpec::make("poly", std::vector<double>{1.0, -2.0}), InvalidInput);
    CHECK_THROWS_AS(KernelSpec::make("rank-one", std::vector<double>{9.0}), InvalidInput);
    CHECK_THROWS_AS(KernelSpec::make("gaussian", {}), InvalidInput);
    CHECK_THROWS_AS(discretize(KernelSpec::make("constant", {}), 1), InvalidInput);
}

TEST_CASE("constant kernel discretizations have unit spectral radius") {
    const KernelSpec k = KernelSpec::make("constant", {});
    for (std::size_t n : {16, 32, 64}) {
        const Discretization d = discretize(k, n);
        CHECK(d.matrix.dim() == n);
        CHECK(d.weight == 1.0 / static_cast<double>(n));
        CHECK(std::abs(spectral_radius(d.matrix, 1e-13) - 1.0) <= 1e-12);
    }
}

TEST_CASE("rank-one catalog kernels have unit spectral radius at every grid") {
    for (int idx = 0; idx < KernelSpec::rank_one_catalog_size(); ++idx) {
        const KernelSpec k = KernelSpec::make("rank-one", std::vector<double>{double(idx)});
        for (std::size_t n : {16, 32, 64}) {
            const Discretization d = discretize(k, n);
            CHECK(std::abs(spectral_radius(d.matrix, 1e-13) - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("midpoint nodes are the cell centers") {
    const Discretization d = discretize(KernelSpec::make("constant", {}), 4);
    CHECK(d.nodes == std::vector<double>{0.125, 0.375, 0.625, 0.875});
}

TEST_CASE("discretization commutes with the weighted geometric mean") {
    const KernelSpec ka = KernelSpec::make("exp-diff", std::vector<double>{1.0});
    const KernelSpec kb = KernelSpec::make("poly", std::vector<double>{0.5, 2.0});
    const std::size_t n = 24;
    const NonnegMatrix da = discretize(ka, n).matrix;
    const NonnegMatrix db = discretize(kb, n).matrix;
    const WeightVector w({0.3, 0.7}, WeightRegime::UnitSum);
    const NonnegMatrix mats[] = {da, db};
    const NonnegMatrix mean_then = weighted_geometric_mean(mats, w);

    // mean of the kernels first, sampled on the same grid
    const Discretization ref = discretize(ka, n);
    NonnegMatrix direct(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double x = ref.nodes[i], y = ref.nodes[j];
            direct(i, j) = ref.weight * std::pow(ka.eval(x, y), 0.3) *
                           std::pow(kb.eval(x, y), 0.7);
        }
    CHECK(approx_equal(mean_then, direct, 1e-14));

    // and with the weighted symmetrization
    const NonnegMatrix sym_then = symmetrize_alpha(da, AlphaValue(0.25));
    NonnegMatrix sym_direct(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double x = ref.nodes[i], y = ref.nodes[j];
            sym_direct(i, j) = ref.weight * std::pow(ka.eval(x, y), 0.25) *
                               std::pow(ka.eval(y, x), 0.75);
        }
    CHECK(approx_equal(sym_then, sym_direct, 1e-14));
}

TEST_CASE("exp-diff symmetrization norm matches the closed form") {
    const KernelSpec k = KernelSpec::make("exp-diff", std::vector<double>{1.0});
    const Discretization d = discretize(k, 64);
    for (double alpha : {0.0, 0.1, 0.25, 0.5, 0.75, 1.0}) {
        const double got = operator_norm(symmetrize_alpha(d.matrix, AlphaValue(alpha)), 1e-12);
        const double want = exp_diff_sym_norm(1.0, alpha);
        CHECK(std::abs(got - want) <= 1e-3 * want);
    }
}

TEST_CASE("quadrature error shrinks quadratically for the exp-diff norm") {
    const KernelSpec k = KernelSpec::make("exp-diff", std::vector<double>{1.0});
    const double want = exp_diff_sym_norm(1.0, 0.0);
    double prev_err = 0.0;
    for (std::size_t n : {16, 32, 64}) {
        const Discretization d = discretize(k, n);
        const double got = operator_norm(symmetrize_alpha(d.matrix, AlphaValue(0.0)), 1e-12);
        const double err = std::abs(got - want);
        if (prev_err > 0.0) CHECK(err <= prev_err / 2.5); // ~4x per halving
        prev_err = err;
    }
}

TEST_CASE("constant kernel rho_1 curve is flat at one") {
    TrialConfig cfg;
    const KernelSpec k = KernelSpec::make("constant", {});
    for (std::size_t n : {16, 32}) {
        const MatrixSet factors[] = {MatrixSet::singleton(discretize(k, n).matrix)};
        const AlphaCurve curve = scan_rho_n(factors, RhoSelector::R, cfg);
        for (const auto& p : curve.points)
            CHECK(std::abs(0.5 * (p.value.lower + p.value.upper) - 1.0) <= 1e-10);
        CHECK(curve.monotone_ok);
    }
}

TEST_CASE("refinement study: verdicts invariant across grids") {
    TrialConfig cfg;
    cfg.n_factors = 1;
    const std::size_t grids[] = {16, 32, 64};
    for (const char* id : {"exp-diff", "poly"}) {
        const KernelSpec k = KernelSpec::make(
            id, std::string(id) == "poly" ? std::vector<double>{0.5, 1.5}
                                          : std::vector<double>{1.0});
        const RefinementReport r =
            refinement_study(k, TheoremId::RhoN, grids, RhoSelector::Norm, cfg);
        CHECK(r.verdicts_invariant);
        for (const auto& e : r.entries) CHECK(e.verdict == "MONOTONE_OK");
    }
}

TEST_CASE("refinement study: weighted-mean margins drift at quadrature rate") {
    TrialConfig cfg;
    const KernelSpec k = KernelSpec::make("poly", std::vector<double>{0.5, 1.5});
    const std::size_t coarse[] = {16, 32};
    const std::size_t fine[] = {32, 64};
    const RefinementReport rc =
        refinement_study(k, TheoremId::EjsMean, coarse, RhoSelector::Norm, cfg);
    const RefinementReport rf =
        refinement_study(k, TheoremId::EjsMean, fine, RhoSelector::Norm, cfg);
    CHECK(rc.verdicts_invariant);
    CHECK(rf.verdicts_invariant);
    // drift between successive refinements shrinks roughly like N^-2; allow 10x
    CHECK(rf.max_drift <= rc.max_drift / 4.0 * 10.0);
}

TEST_CASE("refinement study rejects bracket-only theorems") {
    TrialConfig cfg;
    const KernelSpec k = KernelSpec::make("constant", {});
    const std::size_t grids[] = {16};
    CHECK_THROWS_AS(refinement_study(k, TheoremId::AlphaInclusion, grids, RhoSelector::R, cfg),
                    InvalidInput);
}
