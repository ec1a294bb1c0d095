#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "hjsr/errors.hpp"

namespace hjsr {

// Dense square matrix with finite, entrywise-nonnegative entries.
// Row-major storage; value semantics; validated on construction.
class NonnegMatrix {
public:
    NonnegMatrix() = default;

    explicit NonnegMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, 0.0) {
        if (dim == 0) throw InvalidInput("matrix dimension must be positive");
    }

    NonnegMatrix(std::size_t dim, std::vector<double> row_major)
        : dim_(dim), a_(std::move(row_major)) {
        if (dim == 0) throw InvalidInput("matrix dimension must be positive");
        if (a_.size() != dim * dim)
            throw InvalidInput("entry count does not match a square matrix of the given dimension");
        validate();
    }

    NonnegMatrix(std::initializer_list<std::initializer_list<double>> rows) {
        dim_ = rows.size();
        if (dim_ == 0) throw InvalidInput("matrix dimension must be positive");
        a_.reserve(dim_ * dim_);
        for (const auto& row : rows) {
            if (row.size() != dim_) throw InvalidInput("matrix rows must all have length dim");
            a_.insert(a_.end(), row.begin(), row.end());
        }
        validate();
    }

    static NonnegMatrix identity(std::size_t dim) {
        NonnegMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static NonnegMatrix ones(std::size_t dim) {
        NonnegMatrix m(dim);
        for (auto& x : m.a_) x = 1.0;
        return m;
    }

    std::size_t dim() const noexcept { return dim_; }

    double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }

    std::span<const double> entries() const& noexcept { return a_; }
    std::span<const double> entries() const&& = delete; // would dangle
    const double* data() const noexcept { return a_.data(); }
    double* data() noexcept { return a_.data(); }

    bool is_zero() const noexcept {
        for (double x : a_)
            if (x != 0.0) return false;
        return true;
    }

    friend bool operator==(const NonnegMatrix& a, const NonnegMatrix& b) {
        return a.dim_ == b.dim_ && a.a_ == b.a_;
    }

    // Total order used to canonicalize set element order.
    friend bool lex_less(const NonnegMatrix& a, const NonnegMatrix& b) {
        if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
        for (std::size_t k = 0; k < a.a_.size(); ++k) {
            if (a.a_[k] != b.a_[k]) return a.a_[k] < b.a_[k];
        }
        return false;
    }

private:
    void validate() const {
        for (double x : a_) {
            if (!std::isfinite(x)) throw InvalidInput("matrix entries must be finite");
            if (x < 0.0) throw InvalidInput("matrix entries must be nonnegative");
        }
    }

    std::size_t dim_ = 0;
    std::vector<double> a_;
};

// Weight exponents for Hadamard geometric means.  Two regimes: the weights
// sum to one, or the sum is allowed to be >= 1 (matrix-level results only).
enum class WeightRegime { UnitSum, GeOneSum };

class WeightVector {
public:
    WeightVector(std::vector<double> weights, WeightRegime regime)
        : w_(std::move(weights)), regime_(regime) {
        if (w_.empty()) throw InvalidInput("weight vector must be nonempty");
        double sum = 0.0;
        for (double a : w_) {
            if (!(a >= 0.0) || !std::isfinite(a))
                throw InvalidInput("weights must be finite and nonnegative");
            sum += a;
        }
        if (regime_ == WeightRegime::UnitSum) {
            if (std::abs(sum - 1.0) > 1e-12)
                throw InvalidInput("unit-sum weights must sum to 1 within 1e-12");
        } else {
            if (sum < 1.0 - 1e-12)
                throw InvalidInput("ge-one-sum weights must sum to at least 1");
        }
    }

    std::size_t size() const noexcept { return w_.size(); }
    double operator[](std::size_t j) const { return w_[j]; }
    std::span<const double> weights() const noexcept { return w_; }
    WeightRegime regime() const noexcept { return regime_; }

private:
    std::vector<double> w_;
    WeightRegime regime_;
};

// Symmetrization parameter, confined to [0,1].
class AlphaValue {
public:
    explicit AlphaValue(double v) : v_(v) {
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("alpha must lie in [0,1]");
    }
    double value() const noexcept { return v_; }

private:
    double v_;
};

// Entrywise power with the 0^0 := 1 convention, so zero-weight factors drop
// out of geometric means and the alpha = 0, 1 symmetrization endpoints are
// the adjoint and the matrix itself.  Exponents 0 and 1 are exact.
inline double entry_pow(double x, double a) {
    if (a == 0.0) return 1.0;
    if (a == 1.0) return x;
    return std::pow(x, a);
}

// Ordinary dense arithmetic.
NonnegMatrix multiply(const NonnegMatrix& a, const NonnegMatrix& b);
NonnegMatrix add(const NonnegMatrix& a, const NonnegMatrix& b);
NonnegMatrix scale(double c, const NonnegMatrix& a);

// Serial reference product kept for parity tests and benchmarks.
NonnegMatrix multiply_serial(const NonnegMatrix& a, const NonnegMatrix& b);

// Hadamard algebra.
NonnegMatrix hadamard_product(const NonnegMatrix& a, const NonnegMatrix& b);
NonnegMatrix hadamard_power(const NonnegMatrix& a, double alpha);
NonnegMatrix weighted_geometric_mean(std::span<const NonnegMatrix> mats, const WeightVector& w);
NonnegMatrix symmetrize_alpha(const NonnegMatrix& a, AlphaValue alpha);
NonnegMatrix adjoint(const NonnegMatrix& a);

// Entrywise order and approximate comparison.
bool entrywise_leq(const NonnegMatrix& a, const NonnegMatrix& b);
bool approx_equal(const NonnegMatrix& a, const NonnegMatrix& b, double tol);

// Row/column statistics used by the scalar functionals and cheap bounds.
double max_row_sum(const NonnegMatrix& a);
double max_col_sum(const NonnegMatrix& a);
double max_diag(const NonnegMatrix& a);
double max_entry(const NonnegMatrix& a);

} // namespace hjsr
