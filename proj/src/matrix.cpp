#include "hjsr/matrix.hpp"

#include <algorithm>
#include <cstdint>

#include "hjsr/parallel.hpp"

namespace hjsr {

namespace {

void require_same_dim(const NonnegMatrix& a, const NonnegMatrix& b, const char* op) {
    if (a.dim() != b.dim())
        throw InvalidInput(std::string(op) + ": dimension mismatch");
}

} // namespace

NonnegMatrix multiply(const NonnegMatrix& a, const NonnegMatrix& b) {
    require_same_dim(a, b, "multiply");
    const std::int64_t n = static_cast<std::int64_t>(a.dim());
    NonnegMatrix r(a.dim());
    double* rp = r.data();
    const double* ap = a.data();
    const double* bp = b.data();
    // Row-parallel only for kernel-lab sized matrices; product-set
    // enumeration parallelizes one level further out.
#ifdef _OPENMP
#pragma omp parallel for num_threads(thread_count()) schedule(static) if (n >= 96)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        double* row = rp + i * n;
        for (std::int64_t k = 0; k < n; ++k) {
            const double aik = ap[i * n + k];
            if (aik == 0.0) continue;
            const double* brow = bp + k * n;
            for (std::int64_t j = 0; j < n; ++j) row[j] += aik * brow[j];
        }
    }
    return r;
}

NonnegMatrix multiply_serial(const NonnegMatrix& a, const NonnegMatrix& b) {
    require_same_dim(a, b, "multiply");
    const std::size_t n = a.dim();
    NonnegMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

NonnegMatrix add(const NonnegMatrix& a, const NonnegMatrix& b) {
    require_same_dim(a, b, "add");
    NonnegMatrix r(a.dim());
    const std::size_t m = a.dim() * a.dim();
    for (std::size_t k = 0; k < m; ++k) r.data()[k] = a.data()[k] + b.data()[k];
    return r;
}

NonnegMatrix scale(double c, const NonnegMatrix& a) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidInput("scale factor must be finite and nonnegative");
    NonnegMatrix r(a.dim());
    const std::size_t m = a.dim() * a.dim();
    for (std::size_t k = 0; k < m; ++k) r.data()[k] = c * a.data()[k];
    return r;
}

NonnegMatrix hadamard_product(const NonnegMatrix& a, const NonnegMatrix& b) {
    require_same_dim(a, b, "hadamard_product");
    NonnegMatrix r(a.dim());
    const std::size_t m = a.dim() * a.dim();
    for (std::size_t k = 0; k < m; ++k) r.data()[k] = a.data()[k] * b.data()[k];
    return r;
}

NonnegMatrix hadamard_power(const NonnegMatrix& a, double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw InvalidInput("hadamard_power: exponent must be finite and nonnegative");
    NonnegMatrix r(a.dim());
    const std::size_t m = a.dim() * a.dim();
    for (std::size_t k = 0; k < m; ++k) r.data()[k] = entry_pow(a.data()[k], alpha);
    return r;
}

NonnegMatrix weighted_geometric_mean(std::span<const NonnegMatrix> mats, const WeightVector& w) {
    if (mats.empty()) throw InvalidInput("weighted_geometric_mean: no factors");
    if (mats.size() != w.size())
        throw InvalidInput("weighted_geometric_mean: factor/weight count mismatch");
    const std::size_t n = mats[0].dim();
    for (const auto& m : mats)
        if (m.dim() != n) throw InvalidInput("weighted_geometric_mean: dimension mismatch");
    NonnegMatrix r = NonnegMatrix::ones(n);
    for (std::size_t l = 0; l < mats.size(); ++l) {
        if (w[l] == 0.0) continue; // zero-weight factor contributes all-ones
        const std::size_t m = n * n;
        for (std::size_t k = 0; k < m; ++k)
            r.data()[k] *= entry_pow(mats[l].data()[k], w[l]);
    }
    return r;
}

NonnegMatrix symmetrize_alpha(const NonnegMatrix& a, AlphaValue alpha) {
    const double al = alpha.value();
    const std::size_t n = a.dim();
    NonnegMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            r(i, j) = entry_pow(a(i, j), al) * entry_pow(a(j, i), 1.0 - al);
    return r;
}

NonnegMatrix adjoint(const NonnegMatrix& a) {
    const std::size_t n = a.dim();
    NonnegMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r(i, j) = a(j, i);
    return r;
}

bool entrywise_leq(const NonnegMatrix& a, const NonnegMatrix& b) {
    if (a.dim() != b.dim()) return false;
    const std::size_t m = a.dim() * a.dim();
    for (std::size_t k = 0; k < m; ++k)
        if (a.data()[k] > b.data()[k]) return false;
    return true;
}

bool approx_equal(const NonnegMatrix& a, const NonnegMatrix& b, double tol) {
    if (a.dim() != b.dim()) return false;
    const std::size_t m = a.dim() * a.dim();
    for (std::size_t k = 0; k < m; ++k) {
        const double x = a.data()[k], y = b.data()[k];
        if (std::abs(x - y) > tol * std::max({1.0, x, y})) return false;
    }
    return true;
}

double max_row_sum(const NonnegMatrix& a) {
    const std::size_t n = a.dim();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += a(i, j);
        best = std::max(best, s);
    }
    return best;
}

double max_col_sum(const NonnegMatrix& a) {
    const std::size_t n = a.dim();
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += a(i, j);
        best = std::max(best, s);
    }
    return best;
}

double max_diag(const NonnegMatrix& a) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) best = std::max(best, a(i, i));
    return best;
}

double max_entry(const NonnegMatrix& a) {
    double best = 0.0;
    for (double x : a.entries()) best = std::max(best, x);
    return best;
}

} // namespace hjsr
