#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hjsr/functionals.hpp"
#include "hjsr/matrix.hpp"

namespace hjsr {

// Cap on the pre-dedup element count an operation may materialize.
struct SetBudget {
    std::int64_t max_elements = 1'000'000;
};

// Finite nonempty set of same-dimension nonnegative matrices.  Elements are
// kept exact-deduplicated and in lexicographic entry order, so every set
// built from the same inputs is bitwise identical regardless of evaluation
// order.
class MatrixSet {
public:
    explicit MatrixSet(std::vector<NonnegMatrix> elements);
    static MatrixSet singleton(NonnegMatrix m);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return elems_.size(); }
    const NonnegMatrix& operator[](std::size_t i) const { return elems_[i]; }
    std::span<const NonnegMatrix> elements() const& noexcept { return elems_; }
    std::span<const NonnegMatrix> elements() const&& = delete; // would dangle

    friend bool operator==(const MatrixSet& a, const MatrixSet& b) {
        return a.elems_ == b.elems_;
    }

private:
    std::size_t dim_ = 0;
    std::vector<NonnegMatrix> elems_;
};

// {AB : A in P, B in Q}
MatrixSet set_product(const MatrixSet& p, const MatrixSet& q, SetBudget budget = {});

// All length-m products from S.
MatrixSet set_power(const MatrixSet& s, int m, SetBudget budget = {});

// Minkowski sum {A_1 + ... + A_m : A_i in sets[i]}.
MatrixSet set_sum(std::span<const MatrixSet> sets, SetBudget budget = {});

// {A_1^(a_1) o ... o A_m^(a_m) : A_i in sets[i]}.  Unit-sum weights; the
// ge-one-sum regime is admitted only when the caller opts into matrix mode.
MatrixSet set_hadamard_mean(std::span<const MatrixSet> sets, const WeightVector& w,
                            bool allow_ge_one_sum = false, SetBudget budget = {});

MatrixSet set_adjoint(const MatrixSet& s);

// {A^(alpha) o (B^T)^(1-alpha) : A in P, B in Q}; the symmetrization of a
// set is the diagonal case P = Q.
MatrixSet set_pair_symmetrize(const MatrixSet& p, const MatrixSet& q, AlphaValue alpha,
                              SetBudget budget = {});
MatrixSet set_symmetrize(const MatrixSet& s, AlphaValue alpha, SetBudget budget = {});

// sup over elements; defined for the norm-like functionals only.
double set_functional_sup(const MatrixSet& s, FunctionalId f);

// Membership up to entrywise tolerance; used by inclusion checks, never to
// shrink sets.
bool contains_approx(const MatrixSet& s, const NonnegMatrix& m, double tol);

// JSON interchange: {"dim": n, "matrices": [[row-major reals], ...]}.
MatrixSet matrix_set_from_json(const std::string& text);
std::string matrix_set_to_json(const MatrixSet& s);
MatrixSet load_matrix_set(const std::string& path);

} // namespace hjsr
