#include "hjsr/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hjsr {

namespace {

// r(A) = 0 for a nonnegative matrix iff its digraph is acyclic, i.e. the
// boolean adjacency matrix is nilpotent.  Exact test, no rounding involved.
bool structurally_nilpotent(const NonnegMatrix& a) {
    const std::size_t n = a.dim();
    std::vector<unsigned char> c(n * n), next(n * n);
    bool any = false;
    for (std::size_t k = 0; k < n * n; ++k) {
        c[k] = a.data()[k] > 0.0 ? 1 : 0;
        any = any || c[k];
    }
    if (!any) return true;
    // Square the boolean matrix until the exponent passes n.
    for (std::size_t len = 1; len < n; len *= 2) {
        std::fill(next.begin(), next.end(), 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                if (!c[i * n + k]) continue;
                for (std::size_t j = 0; j < n; ++j)
                    next[i * n + j] |= c[k * n + j];
            }
        c.swap(next);
        bool nonzero = false;
        for (unsigned char x : c) nonzero = nonzero || x;
        if (!nonzero) return true;
    }
    return false;
}

struct LogBounds {
    double log_lower; // log of a certified lower bound for r(B)
    double log_upper; // log of a certified upper bound for r(B)
};

// Diagonal and row-sum bounds for B^m scaled as exp(log_scale) * M:
//   max_i (B^m)_ii^(1/m) <= r(B) <= max-row-sum(B^m)^(1/m).
LogBounds log_bounds(const std::vector<double>& m, std::size_t n, double log_scale,
                     double power) {
    double dmax = 0.0, rmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += m[i * n + j];
        rmax = std::max(rmax, s);
        dmax = std::max(dmax, m[i * n + i]);
    }
    const double inf = std::numeric_limits<double>::infinity();
    return {dmax > 0.0 ? (log_scale + std::log(dmax)) / power : -inf,
            rmax > 0.0 ? (log_scale + std::log(rmax)) / power : -inf};
}

// Certified bounds on r(A + shift*I) by repeated squaring with running
// renormalization.  The shift makes every diagonal positive, which removes
// the periodicity that stalls the diagonal lower bound, and it moves the
// Perron root by exactly +shift.
PerronBracket gelfand_squaring(const NonnegMatrix& a, double shift, double rel_tol,
                               std::int64_t& units_left) {
    const std::size_t n = a.dim();
    std::vector<double> m(a.entries().begin(), a.entries().end());
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] += shift;

    double top = 0.0;
    for (double x : m) top = std::max(top, x);
    double log_scale = std::log(top);
    for (double& x : m) x /= top;

    double power = 1.0;
    auto b = log_bounds(m, n, log_scale, power);
    double lo = b.log_lower, hi = b.log_upper;

    PerronBracket out;
    std::vector<double> sq(n * n);
    constexpr int kMaxSquarings = 60;
    for (int k = 0; k < kMaxSquarings; ++k) {
        if (std::exp(hi - lo) - 1.0 <= rel_tol) break;
        units_left -= static_cast<std::int64_t>(n);
        if (units_left < 0)
            throw NumericalFailure("spectral_radius: iteration budget exhausted");
        std::fill(sq.begin(), sq.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                const double mil = m[i * n + l];
                if (mil == 0.0) continue;
                for (std::size_t j = 0; j < n; ++j) sq[i * n + j] += mil * m[l * n + j];
            }
        top = 0.0;
        for (double x : sq) top = std::max(top, x);
        for (std::size_t i = 0; i < n * n; ++i) m[i] = sq[i] / top;
        log_scale = 2.0 * log_scale + std::log(top);
        power *= 2.0;
        out.squarings = k + 1;
        b = log_bounds(m, n, log_scale, power);
        lo = std::max(lo, b.log_lower);
        hi = std::min(hi, b.log_upper);
    }
    out.lower = std::exp(lo);
    out.upper = std::exp(hi);
    return out;
}

} // namespace

PerronBracket spectral_radius_bracket(const NonnegMatrix& a, double rel_tol,
                                      FunctionalBudget budget) {
    if (a.dim() == 0) throw InvalidInput("spectral_radius: empty matrix");
    if (structurally_nilpotent(a)) return {0.0, 0.0, 0};

    std::int64_t units_left = budget.units;
    const double scale = max_row_sum(a); // > 0: not nilpotent
    double shift = 1e-3 * scale;
    PerronBracket best{0.0, std::numeric_limits<double>::infinity(), 0};
    // If the root is tiny relative to the shift, the subtraction loses the
    // digits we need; retry with a shift matched to the current estimate.
    for (int attempt = 0; attempt < 6; ++attempt) {
        const PerronBracket shifted = gelfand_squaring(a, shift, 0.3 * rel_tol, units_left);
        const PerronBracket cur{std::max(shifted.lower - shift, 0.0), shifted.upper - shift,
                                shifted.squarings};
        if (cur.upper - cur.lower < best.upper - best.lower) best = cur;
        if (best.upper <= 0.0) return {0.0, 0.0, best.squarings};
        if (best.upper - best.lower <= rel_tol * best.upper) return best;
        shift = 1e-3 * best.upper;
    }
    throw NumericalFailure("spectral_radius: bounds did not meet the accuracy target");
}

double spectral_radius(const NonnegMatrix& a, double rel_tol) {
    const PerronBracket b = spectral_radius_bracket(a, rel_tol);
    return 0.5 * (b.lower + b.upper);
}

double spectral_radius(const NonnegMatrix& a) { return spectral_radius(a, 1e-9); }

NonnegMatrix symmetric_part(const NonnegMatrix& a) {
    const std::size_t n = a.dim();
    NonnegMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r(i, j) = 0.5 * (a(i, j) + a(j, i));
    return r;
}

NonnegMatrix gram(const NonnegMatrix& a) {
    const std::size_t n = a.dim();
    NonnegMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += a(k, i) * a(k, j);
            r(i, j) = s;
        }
    return r;
}

PerronBracket operator_norm_bracket(const NonnegMatrix& a, double rel_tol) {
    // The Gram matrix of a nonnegative matrix is again nonnegative, so the
    // Perron machinery applies; sqrt halves the relative width.
    PerronBracket g = spectral_radius_bracket(gram(a), rel_tol);
    return {std::sqrt(g.lower), std::sqrt(g.upper), g.squarings};
}

double operator_norm(const NonnegMatrix& a, double rel_tol) {
    const PerronBracket b = operator_norm_bracket(a, rel_tol);
    return 0.5 * (b.lower + b.upper);
}

double operator_norm(const NonnegMatrix& a) { return operator_norm(a, 1e-9); }

double numerical_radius(const NonnegMatrix& a, double rel_tol) {
    return spectral_radius(symmetric_part(a), rel_tol);
}

double numerical_radius(const NonnegMatrix& a) { return numerical_radius(a, 1e-9); }

double functional_value(FunctionalId f, const NonnegMatrix& a) {
    switch (f) {
        case FunctionalId::SpectralRadius: return spectral_radius(a);
        case FunctionalId::OperatorNorm: return operator_norm(a);
        case FunctionalId::NumericalRadius: return numerical_radius(a);
    }
    throw InvalidInput("unknown functional");
}

} // namespace hjsr
