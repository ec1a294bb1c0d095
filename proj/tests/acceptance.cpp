// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Tolerances and instance counts are pinned here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hjsr/harness.hpp"
#include "hjsr/jsr.hpp"
#include "hjsr/kernel.hpp"
#include "support/oracles.hpp"

using namespace hjsr;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail, Clock::time_point t0) {
    const double secs =
        std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("%s criterion %d: %s (%.1f s)\n", pass ? "PASS" : "FAIL", criterion,
                detail.c_str(), secs);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

MatrixSet random_set_local(SampleStream& rng, std::size_t dim, std::size_t size) {
    std::vector<NonnegMatrix> elems;
    for (std::size_t k = 0; k < size; ++k) {
        std::vector<double> e(dim * dim);
        for (auto& x : e) x = rng.exponential();
        elems.emplace_back(dim, std::move(e));
    }
    return MatrixSet(std::move(elems));
}

// ---- criterion 1: the weighted-geometric-mean inequality ----------------

void criterion1() {
    const auto t0 = Clock::now();
    int violations = 0, errors = 0, total = 0;
    for (WeightRegime regime : {WeightRegime::UnitSum, WeightRegime::GeOneSum}) {
        int batch = 0;
        for (std::size_t dim = 2; dim <= 5; ++dim)
            for (int m = 2; m <= 4; ++m) {
                TrialConfig cfg;
                cfg.dim = dim;
                cfg.m_cols = m;
                cfg.trials = 84;
                cfg.seed = 1000 + static_cast<std::uint64_t>(batch++);
                cfg.regime = regime;
                const VerificationReport r = run_verification(TheoremId::EjsMean, cfg);
                violations += r.violations;
                errors += r.errors;
                total += r.passed + r.violations + r.inconclusive + r.errors;
            }
    }
    std::ostringstream d;
    d << "weighted-mean chains, " << total << " instances over both regimes, " << violations
      << " violations, " << errors << " errors";
    report(1, violations == 0 && errors == 0, d.str(), t0);
}

// ---- criterion 2: products of Hadamard means -----------------------------

void criterion2() {
    const auto t0 = Clock::now();
    int violations = 0, errors = 0, total = 0;
    int batch = 0;
    for (int k = 2; k <= 3; ++k)
        for (int m = 2; m <= 3; ++m)
            for (std::size_t dim : {3, 4}) {
                TrialConfig cfg;
                cfg.dim = dim;
                cfg.k_rows = k;
                cfg.m_cols = m;
                cfg.trials = 38;
                cfg.seed = 2000 + static_cast<std::uint64_t>(batch++);
                const VerificationReport r = run_verification(TheoremId::MeanOfProducts, cfg);
                violations += r.violations;
                errors += r.errors;
                total += static_cast<int>(r.trials.size());
            }
    std::ostringstream d;
    d << "mean-of-products chains, " << total << " grids, " << violations << " violations, "
      << errors << " errors";
    report(2, violations == 0 && errors == 0, d.str(), t0);
}

// ---- criterion 3: inclusion lemmas ---------------------------------------

void criterion3() {
    const auto t0 = Clock::now();
    TrialConfig cfg;
    cfg.dim = 3;
    cfg.set_size = 2;
    cfg.trials = 500; // each trial draws one pair per branch
    cfg.seed = 3000;
    const VerificationReport r = run_verification(TheoremId::AlphaInclusion, cfg);
    std::ostringstream d;
    d << "inclusion lemmas, 500 pairs per branch, " << r.violations << " violations, "
      << r.errors << " errors";
    report(3, r.violations == 0 && r.errors == 0, d.str(), t0);
}

// ---- criterion 4: rho_n monotonicity -------------------------------------

void criterion4() {
    const auto t0 = Clock::now();
    bool pass = true;
    std::ostringstream d;

    { // (a) closed form for the antidiagonal singleton
        TrialConfig cfg;
        const MatrixSet factors[] = {MatrixSet::singleton(NonnegMatrix{{0, 1}, {4, 0}})};
        const AlphaCurve curve = scan_rho_n(factors, RhoSelector::Norm, cfg);
        bool ok = curve.monotone_ok && curve.min_at_half && curve.points.size() == 21;
        for (const auto& p : curve.points) {
            const double expect = std::pow(4.0, std::max(p.alpha, 1.0 - p.alpha));
            ok = ok && std::abs(0.5 * (p.value.lower + p.value.upper) - expect) <=
                           1e-10 * expect;
        }
        pass = pass && ok;
        d << "closed-form " << (ok ? "ok" : "FAIL");
    }

    { // (b) 2x2 alpha-invariance of the spectral radius
        SampleStream rng(4001);
        bool ok = true;
        TrialConfig cfg;
        for (int t = 0; t < 100; ++t) {
            const MatrixSet factors[] = {MatrixSet::singleton(random_matrix(rng, 2, 1.0))};
            const AlphaCurve curve = scan_rho_n(factors, RhoSelector::R, cfg);
            const double r0 = 0.5 * (curve.points[0].value.lower + curve.points[0].value.upper);
            for (const auto& p : curve.points)
                ok = ok && std::abs(0.5 * (p.value.lower + p.value.upper) - r0) <=
                               1e-10 * std::max(1.0, r0);
        }
        pass = pass && ok;
        d << "; 2x2 invariance " << (ok ? "ok" : "FAIL");
    }

    { // (c) singleton instances, exact functionals
        TrialConfig cfg;
        cfg.dim = 3;
        cfg.set_size = 1;
        cfg.n_factors = 2;
        cfg.trials = 100;
        cfg.seed = 4002;
        const VerificationReport r = run_verification(TheoremId::RhoN, cfg);
        const bool ok = r.violations == 0 && r.errors == 0 && r.inconclusive == 0;
        pass = pass && ok;
        d << "; singleton scans " << (ok ? "ok" : "FAIL");
    }

    { // (d) bracketed scans on two-element sets
        SampleStream rng(4003);
        int violations = 0, inconclusive_pairs = 0;
        TrialConfig cfg;
        cfg.budget.max_depth = 5;
        for (int t = 0; t < 25; ++t) {
            std::vector<MatrixSet> factors{random_set_local(rng, 3, 2),
                                           random_set_local(rng, 3, 2)};
            for (RhoSelector sel : {RhoSelector::Gsr, RhoSelector::Jsr}) {
                const AlphaCurve curve = scan_rho_n(factors, sel, cfg);
                if (!curve.monotone_ok || !curve.min_at_half) ++violations;
                inconclusive_pairs += curve.inconclusive_pairs;
            }
        }
        pass = pass && violations == 0;
        d << "; bracketed scans " << (violations == 0 ? "ok" : "FAIL") << " ("
          << inconclusive_pairs << " inconclusive pairs reported)";
    }

    report(4, pass, d.str(), t0);
}

// ---- criterion 5: rho-tilde and rho-bar scans -----------------------------

void criterion5() {
    const auto t0 = Clock::now();
    TrialConfig cfg;
    cfg.dim = 3;
    cfg.set_size = 1;
    cfg.n_factors = 2;
    cfg.m_cols = 2;
    cfg.trials = 50;
    cfg.seed = 5000;
    const VerificationReport tilde = run_verification(TheoremId::RhoTildeN, cfg);
    cfg.seed = 5001;
    const VerificationReport bar = run_verification(TheoremId::RhoBarN, cfg);
    const bool ok = tilde.violations == 0 && tilde.errors == 0 && tilde.inconclusive == 0 &&
                    bar.violations == 0 && bar.errors == 0 && bar.inconclusive == 0;
    std::ostringstream d;
    d << "rho-tilde and rho-bar scans with the sum bound, 50 instances each, "
      << tilde.violations + bar.violations << " violations";
    report(5, ok, d.str(), t0);
}

// ---- criterion 6: engine sanity -------------------------------------------

void criterion6() {
    const auto t0 = Clock::now();
    bool pass = true;
    std::ostringstream d;

    { // shift pair collapses at depth 2
        const MatrixSet shift(
            {NonnegMatrix{{0, 1}, {0, 0}}, NonnegMatrix{{0, 0}, {1, 0}}});
        const RadiusBracket b =
            radius_bracket(shift, SetRadiusKind::Generalized, {2, 200000, true});
        const bool ok = std::abs(b.lower - 1.0) <= 1e-9 && std::abs(b.upper - 1.0) <= 1e-9;
        pass = pass && ok;
        d << "shift pair " << (ok ? "ok" : "FAIL");
    }

    { // singleton collapse at depth 8
        SampleStream rng(6001);
        bool ok = true;
        for (int t = 0; t < 50; ++t) {
            const NonnegMatrix a = random_matrix(rng, 3, 1.0);
            const RadiusBracket b = radius_bracket(MatrixSet::singleton(a),
                                                   SetRadiusKind::Generalized,
                                                   {8, 200000, true});
            const double r = spectral_radius(a);
            ok = ok && std::abs(0.5 * (b.lower + b.upper) - r) <= 1e-6 * std::max(1.0, r) &&
                 (b.upper - b.lower) <= 1e-6 * std::max(1.0, b.upper);
        }
        pass = pass && ok;
        d << "; singleton collapse " << (ok ? "ok" : "FAIL");
    }

    { // power identity
        SampleStream rng(6002);
        bool ok = true;
        for (int t = 0; t < 50; ++t) {
            const MatrixSet s = random_set_local(rng, 3, 2);
            const MatrixSet sq = set_power(s, 2);
            const RadiusBracket bs =
                radius_bracket(s, SetRadiusKind::Generalized, {6, 500000, true});
            const RadiusBracket bsq =
                radius_bracket(sq, SetRadiusKind::Generalized, {3, 500000, true});
            ok = ok && bsq.lower <= bs.upper * bs.upper * (1 + 1e-9) + 1e-12 &&
                 bs.lower * bs.lower <= bsq.upper * (1 + 1e-9) + 1e-12;
        }
        pass = pass && ok;
        d << "; power identity " << (ok ? "ok" : "FAIL");
    }

    { // pruning soundness
        SampleStream rng(6003);
        bool ok = true;
        for (int t = 0; t < 100; ++t) {
            const std::size_t dim = 2 + static_cast<std::size_t>(rng.uniform01() * 3);
            const std::size_t size = 2 + static_cast<std::size_t>(rng.uniform01() * 2);
            const MatrixSet s = random_set_local(rng, dim, size);
            const int depth = 3 + static_cast<int>(rng.uniform01() * 3);
            const RadiusBracket on =
                radius_bracket(s, SetRadiusKind::Generalized, {depth, 500000, true});
            const RadiusBracket off =
                radius_bracket(s, SetRadiusKind::Generalized, {depth, 500000, false});
            ok = ok && std::abs(on.lower - off.lower) <= 1e-12 * std::max(1.0, off.lower) &&
                 std::abs(on.upper - off.upper) <= 1e-12 * std::max(1.0, off.upper);
        }
        pass = pass && ok;
        d << "; pruning " << (ok ? "ok" : "FAIL");
    }

    report(6, pass, d.str(), t0);
}

// ---- criterion 7: kernel lab ----------------------------------------------

double exp_diff_sym_norm(double c, double alpha) {
    const double beta = 2.0 * c * (2.0 * alpha - 1.0);
    if (std::abs(beta) < 1e-12) return 1.0;
    return std::sqrt(std::expm1(beta) / beta * (-std::expm1(-beta) / beta));
}

void criterion7() {
    const auto t0 = Clock::now();
    bool pass = true;
    std::ostringstream d;

    { // unit spectral radius of the constant and rank-one kernels
        bool ok = true;
        std::vector<KernelSpec> specs = {KernelSpec::make("constant", {})};
        for (int i = 0; i < KernelSpec::rank_one_catalog_size(); ++i)
            specs.push_back(KernelSpec::make("rank-one", std::vector<double>{double(i)}));
        for (const auto& spec : specs)
            for (std::size_t n : {16, 32, 64}) {
                const double r = spectral_radius(discretize(spec, n).matrix, 1e-13);
                ok = ok && std::abs(r - 1.0) <= 1e-12;
            }
        pass = pass && ok;
        d << "unit radius " << (ok ? "ok" : "FAIL");
    }

    { // exp-diff closed form at N = 64
        const KernelSpec k = KernelSpec::make("exp-diff", std::vector<double>{1.0});
        const Discretization disc = discretize(k, 64);
        bool ok = true;
        for (double alpha : alpha_grid(21)) {
            const double got =
                operator_norm(symmetrize_alpha(disc.matrix, AlphaValue(alpha)), 1e-12);
            const double want = exp_diff_sym_norm(1.0, alpha);
            ok = ok && std::abs(got - want) <= 1e-3 * want;
        }
        pass = pass && ok;
        d << "; exp-diff closed form " << (ok ? "ok" : "FAIL");
    }

    { // verdict invariance across grids for the whole catalog
        const std::size_t grids[] = {16, 32, 64};
        bool ok = true;
        TrialConfig cfg;
        cfg.n_factors = 1;
        std::vector<KernelSpec> specs = {
            KernelSpec::make("constant", {}),
            KernelSpec::make("exp-diff", std::vector<double>{1.0}),
            KernelSpec::make("rank-one", std::vector<double>{0.0}),
            KernelSpec::make("rank-one", std::vector<double>{1.0}),
            KernelSpec::make("poly", std::vector<double>{0.5, 1.5}),
        };
        for (const auto& spec : specs) {
            for (TheoremId t : {TheoremId::RhoN, TheoremId::EjsMean}) {
                const RefinementReport r =
                    refinement_study(spec, t, grids, RhoSelector::Norm, cfg);
                ok = ok && r.verdicts_invariant;
            }
        }
        pass = pass && ok;
        d << "; verdict invariance " << (ok ? "ok" : "FAIL");
    }

    report(7, pass, d.str(), t0);
}

// ---- criterion 8: CLI determinism ------------------------------------------

int run_cli(const std::string& args) {
    const std::string cmd = std::string(HJSR_CLI_PATH) + " " + args + " 2>/dev/null";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void criterion8() {
    const auto t0 = Clock::now();
    bool pass = true;
    std::ostringstream d;
    const std::string setfile = "acc_set.json";
    {
        std::ofstream out(setfile, std::ios::binary);
        out << "{\"dim\": 3, \"matrices\": [[0,1,0,0,0,1,8,0,0],[1,0,0,0,2,0,0,0,3]]}";
    }
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"verify --theorem ejs-mean --dim 3 --cols 3 --trials 40 --seed 42", "acc_verify"},
        {"verify --theorem rho-n --dim 3 --set-size 2 --n-factors 2 --trials 2 --seed 8 "
         "--depth 4",
         "acc_rho"},
        {"scan --theorem rho-n --rho norm --input " + setfile + " --alpha-steps 21",
         "acc_scan"},
        {"scan --theorem rho-bar-n --rho w --dim 3 --n-factors 2 --cols 2 --seed 3",
         "acc_barscan"},
        {"bracket --input " + setfile + " --depth 4", "acc_bracket"},
        {"kernel --kernel exp-diff --kernel-param 1.0 --grid 16,32 --theorem rho-n --rho norm "
         "--n-factors 1",
         "acc_kernel"},
    };
    for (const auto& [args, stem] : commands) {
        const std::string f1 = stem + "_1.out", f2 = stem + "_2.out";
        const int rc1 = run_cli(args + " --out " + f1);
        const int rc2 = run_cli(args + " --out " + f2);
        const bool ok = rc1 == rc2 && rc1 != 1 && slurp(f1) == slurp(f2) && !slurp(f1).empty();
        if (!ok) d << " [" << stem << " differs or failed rc=" << rc1 << "]";
        pass = pass && ok;
        std::remove(f1.c_str());
        std::remove(f2.c_str());
    }
    std::remove(setfile.c_str());
    d << (pass ? "all command outputs byte-identical on re-run" : "");
    report(8, pass, d.str(), t0);
}

} // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (g_failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
