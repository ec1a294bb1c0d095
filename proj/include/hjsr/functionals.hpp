#pragma once

#include <cstdint>

#include "hjsr/matrix.hpp"

namespace hjsr {

// Scalar functionals of a single nonnegative matrix.
enum class FunctionalId { SpectralRadius, OperatorNorm, NumericalRadius };

// Work cap for the iterative functionals, counted in scalar-times-matrix
// units (one unit = n^2 scalar multiplies, so an n x n product costs n
// units).  Exceeding the cap raises NumericalFailure.
struct FunctionalBudget {
    std::int64_t units = 1'000'000;
};

// Certified enclosure of the Perron root: lower <= r(A) <= upper.
struct PerronBracket {
    double lower = 0.0;
    double upper = 0.0;
    int squarings = 0; // power-doubling steps actually taken
};

// Enclose the Perron root of a nonnegative matrix to the requested relative
// width.  Exact zero for structurally nilpotent input.
PerronBracket spectral_radius_bracket(const NonnegMatrix& a, double rel_tol = 1e-9,
                                      FunctionalBudget budget = {});

// Perron root r(A) = max |eigenvalue|, relative accuracy 1e-8 or better.
double spectral_radius(const NonnegMatrix& a);

// Largest singular value, sqrt(r(A^T A)).
double operator_norm(const NonnegMatrix& a);

// Numerical radius of a nonnegative matrix: r((A + A^T)/2).
double numerical_radius(const NonnegMatrix& a);

double functional_value(FunctionalId f, const NonnegMatrix& a);

// Tighter variants used where callers need a specific certified width.
double spectral_radius(const NonnegMatrix& a, double rel_tol);
double operator_norm(const NonnegMatrix& a, double rel_tol);
double numerical_radius(const NonnegMatrix& a, double rel_tol);

// Certified operator-norm enclosure (via the Gram matrix bracket).
PerronBracket operator_norm_bracket(const NonnegMatrix& a, double rel_tol = 1e-9);

NonnegMatrix symmetric_part(const NonnegMatrix& a); // (A + A^T)/2
NonnegMatrix gram(const NonnegMatrix& a);           // A^T A

} // namespace hjsr
