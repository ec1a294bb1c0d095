#pragma once

#include <cstdint>

#include "hjsr/matrix_set.hpp"

namespace hjsr {

enum class SetRadiusKind { Generalized, Joint };
enum class ComparisonOutcome { Consistent, Violation };

// Limits for the product enumeration.  max_products counts every product
// formed, across all depths; overflow yields a partial (still sound) bracket.
struct EnumerationBudget {
    int max_depth = 8;
    std::int64_t max_products = 200'000;
    bool prune = true;
};

// Certified enclosure of a set-radius value.  `exact` marks values computed
// as finite sups or single-matrix functionals rather than depth-limited
// bounds; `partial` marks enumeration cut short by the product cap.
struct Interval {
    double lower = 0.0;
    double upper = 0.0;
    bool exact = false;
    bool partial = false;

    double width_rel() const {
        return upper > 0.0 ? (upper - lower) / upper : 0.0;
    }
};

Interval interval_mul(const Interval& a, const Interval& b);
Interval interval_pow(const Interval& a, double e); // e >= 0
Interval interval_sqrt(const Interval& a);
Interval interval_point(double v);

// Enclosure for r(Sigma) and j(Sigma) at a given enumeration depth.  By the
// Berger-Wang equality for finite matrix sets, both functionals share it.
struct RadiusBracket {
    double lower = 0.0;
    double upper = 0.0;
    int depth_used = 1;
    SetRadiusKind functional = SetRadiusKind::Generalized;
    bool partial = false;

    Interval interval() const { return {lower, upper, false, partial}; }
};

struct BoundResult {
    double value = 0.0;
    int depth_used = 1;
    bool partial = false;
};

// max over m <= max_depth of (max r over length-m products)^(1/m); always a
// true lower bound for the generalized spectral radius.
BoundResult gsr_lower_bound(const MatrixSet& s, const EnumerationBudget& budget = {});

// min over fully-enumerated m of (max norm over length-m products)^(1/m);
// always a true upper bound for the joint spectral radius.
BoundResult jsr_upper_bound(const MatrixSet& s, const EnumerationBudget& budget = {});

RadiusBracket radius_bracket(const MatrixSet& s, SetRadiusKind kind,
                             const EnumerationBudget& budget = {});

// Serial exhaustive enumeration: no pruning, no dedup, no screening.  Kept as
// the reference the engine is tested against, and as the benchmark baseline.
RadiusBracket radius_bracket_reference(const MatrixSet& s, SetRadiusKind kind, int max_depth);

// Necessary-condition test of a claim rho(L) <= rho(R): VIOLATION certifies
// the claim false at the given tolerance, CONSISTENT reports no conflict.
ComparisonOutcome compare_rho(const RadiusBracket& lhs, const RadiusBracket& rhs, double tol);

} // namespace hjsr
