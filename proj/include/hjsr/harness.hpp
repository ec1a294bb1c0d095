#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hjsr/jsr.hpp"
#include "hjsr/matrix_set.hpp"
#include "hjsr/rng.hpp"

namespace hjsr {

// Inequality families under test.  Names mirror the CLI --theorem ids.
enum class TheoremId {
    EjsMean,
    MeanOfProducts,
    SetMeanProd,
    SetMeanSum,
    SymChainProd,
    SymChainSum,
    SymSingle,
    AlphaInclusion,
    SumProdLemma,
    RhoN,
    RhoTildeN,
    RhoBarN,
    WCounterexampleSearch,
};

std::string theorem_name(TheoremId t);
TheoremId parse_theorem(const std::string& name);

// Functional selector for set-level values.  R/Gsr/Jsr all evaluate through
// the enumeration bracket (one bracket serves both set radii); Norm and W are
// exact sups.
enum class RhoSelector { R, Gsr, Jsr, Norm, W };

std::string rho_name(RhoSelector r);
RhoSelector parse_rho(const std::string& name);

struct TrialConfig {
    std::size_t dim = 3;
    std::size_t set_size = 1;
    int n_factors = 2; // symmetrization factor count
    int k_rows = 2;    // product chain length in grids
    int m_cols = 2;    // mean width in grids
    double density = 1.0;
    std::uint64_t seed = 0;
    int trials = 100;
    double tol = -1.0; // < 0 picks the default for the value mode
    int alpha_steps = 21;
    WeightRegime regime = WeightRegime::UnitSum;
    EnumerationBudget budget{};

    void validate() const;
    double tol_exact() const { return tol > 0.0 ? tol : 1e-9; }
    double tol_bracket() const { return tol > 0.0 ? tol : 1e-7; }
};

// Grid on [0,1], forced to contain 0, 1/2 and 1.
std::vector<double> alpha_grid(int steps);

enum class TrialStatus { Pass, Violation, Inconclusive, Error };

struct LinkCheck {
    std::string label;
    double lhs_lower = 0.0, lhs_upper = 0.0;
    double rhs_lower = 0.0, rhs_upper = 0.0;
    double margin = 0.0; // (rhs_upper - lhs_lower) / max(1, rhs_upper)
    TrialStatus status = TrialStatus::Pass;
};

struct TrialResult {
    int index = 0;
    std::uint64_t seed = 0;
    TrialStatus status = TrialStatus::Pass;
    std::vector<LinkCheck> links;
    std::string note;           // findings, error text
    std::string counterexample; // JSON instance dump, present on violation
};

struct VerificationReport {
    TheoremId theorem{};
    TrialConfig config{};
    std::vector<TrialResult> trials;
    int passed = 0, violations = 0, inconclusive = 0, errors = 0;
    int findings = 0; // counterexample-search hits (not violations)
    TrialStatus overall = TrialStatus::Pass;
    double wall_ms = 0.0; // console diagnostics only, never emitted to files
};

// Instance shapes drawn per trial; which fields are filled depends on the
// theorem.  Fully determined by the seed.
struct Instance {
    std::vector<MatrixSet> sets;
    std::vector<std::vector<MatrixSet>> grid;
    std::vector<std::vector<MatrixSet>> grid2;
    std::optional<WeightVector> weights;
    double alpha = -1.0;
    double alpha_low1 = -1.0, alpha_low2 = -1.0;   // inclusion, [0,1/2] branch
    double alpha_high1 = -1.0, alpha_high2 = -1.0; // inclusion, [1/2,1] branch
};

NonnegMatrix random_matrix(SampleStream& rng, std::size_t dim, double density);
MatrixSet random_set(SampleStream& rng, std::size_t dim, std::size_t set_size, double density);
WeightVector random_weights(SampleStream& rng, std::size_t m, WeightRegime regime);
Instance random_instance(TheoremId t, const TrialConfig& cfg, std::uint64_t seed);

// Interval value of a set functional: exact sups for Norm/W, exact for
// single-matrix spectral radius, enumeration bracket otherwise.
Interval set_rho(const MatrixSet& s, RhoSelector rho, const EnumerationBudget& budget);

// Claim rho(L) <= rho(R).  Partial brackets make the claim untestable.
TrialStatus check_leq(const Interval& lhs, const Interval& rhs, double tol);

// Randomized verification over cfg.trials seeded trials.
VerificationReport run_verification(TheoremId t, const TrialConfig& cfg);

// Single-instance checks (used by run_verification and by the kernel lab).
TrialResult check_weighted_mean(TheoremId t, const Instance& inst, const TrialConfig& cfg);
TrialResult check_set_mean(TheoremId t, const Instance& inst, const TrialConfig& cfg);
TrialResult check_symmetrization_chain(TheoremId t, const Instance& inst, const TrialConfig& cfg);
TrialResult check_alpha_inclusion(const Instance& inst, const TrialConfig& cfg);
TrialResult check_sum_prod_lemma(const Instance& inst, const TrialConfig& cfg);

// Alpha scans of the three curve families.
struct CurvePoint {
    double alpha = 0.0;
    Interval value;
};

struct AlphaCurve {
    std::vector<CurvePoint> points;
    bool monotone_ok = true;
    bool min_at_half = true;
    int inconclusive_pairs = 0;
    bool cute_consistent = true; // rho-bar family: bound against plain sums
    double min_margin = 0.0;     // tightest monotone-claim margin on the grid
};

AlphaCurve scan_rho_n(std::span<const MatrixSet> factors, RhoSelector rho,
                      const TrialConfig& cfg);
AlphaCurve scan_rho_tilde_n(std::span<const MatrixSet> factors, RhoSelector rho,
                            const TrialConfig& cfg);
AlphaCurve scan_rho_bar_n(const std::vector<std::vector<MatrixSet>>& grid, RhoSelector rho,
                          const TrialConfig& cfg);

// Deterministic serializations.  Reports omit wall time so identical inputs
// give identical bytes.
std::string report_to_json(const VerificationReport& report);
std::string curve_to_csv(const AlphaCurve& curve);
std::string curve_to_json(const AlphaCurve& curve);

} // namespace hjsr
