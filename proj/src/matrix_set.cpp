#include "hjsr/matrix_set.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hjsr {

namespace {

std::vector<NonnegMatrix> canonicalize(std::vector<NonnegMatrix> v) {
    std::sort(v.begin(), v.end(), [](const NonnegMatrix& a, const NonnegMatrix& b) {
        return lex_less(a, b);
    });
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

void charge(std::int64_t count, const SetBudget& budget, const char* op) {
    if (count > budget.max_elements)
        throw BudgetExceeded(std::string(op) + ": pre-dedup cardinality " +
                             std::to_string(count) + " exceeds cap " +
                             std::to_string(budget.max_elements));
}

void require_same_dim(const MatrixSet& p, const MatrixSet& q, const char* op) {
    if (p.dim() != q.dim()) throw InvalidInput(std::string(op) + ": dimension mismatch");
}

} // namespace

MatrixSet::MatrixSet(std::vector<NonnegMatrix> elements) {
    if (elements.empty()) throw InvalidInput("matrix set must be nonempty");
    dim_ = elements[0].dim();
    for (const auto& m : elements)
        if (m.dim() != dim_) throw InvalidInput("matrix set elements must share one dimension");
    elems_ = canonicalize(std::move(elements));
}

MatrixSet MatrixSet::singleton(NonnegMatrix m) {
    std::vector<NonnegMatrix> v;
    v.push_back(std::move(m));
    return MatrixSet(std::move(v));
}

MatrixSet set_product(const MatrixSet& p, const MatrixSet& q, SetBudget budget) {
    require_same_dim(p, q, "set_product");
    charge(static_cast<std::int64_t>(p.size()) * static_cast<std::int64_t>(q.size()), budget,
           "set_product");
    std::vector<NonnegMatrix> out;
    out.reserve(p.size() * q.size());
    for (const auto& a : p.elements())
        for (const auto& b : q.elements()) out.push_back(multiply(a, b));
    return MatrixSet(std::move(out));
}

MatrixSet set_power(const MatrixSet& s, int m, SetBudget budget) {
    if (m < 1) throw InvalidInput("set_power: exponent must be >= 1");
    MatrixSet out = s;
    for (int k = 1; k < m; ++k) out = set_product(out, s, budget);
    return out;
}

MatrixSet set_sum(std::span<const MatrixSet> sets, SetBudget budget) {
    if (sets.empty()) throw InvalidInput("set_sum: no summand sets");
    const std::size_t dim = sets[0].dim();
    std::int64_t count = 1;
    for (const auto& s : sets) {
        if (s.dim() != dim) throw InvalidInput("set_sum: dimension mismatch");
        count *= static_cast<std::int64_t>(s.size());
        charge(count, budget, "set_sum");
    }
    std::vector<NonnegMatrix> acc(sets[0].elements().begin(), sets[0].elements().end());
    for (std::size_t l = 1; l < sets.size(); ++l) {
        std::vector<NonnegMatrix> next;
        next.reserve(acc.size() * sets[l].size());
        for (const auto& a : acc)
            for (const auto& b : sets[l].elements()) next.push_back(add(a, b));
        acc = std::move(next);
    }
    return MatrixSet(std::move(acc));
}

MatrixSet set_hadamard_mean(std::span<const MatrixSet> sets, const WeightVector& w,
                            bool allow_ge_one_sum, SetBudget budget) {
    if (sets.empty()) throw InvalidInput("set_hadamard_mean: no factor sets");
    if (sets.size() != w.size())
        throw InvalidInput("set_hadamard_mean: factor/weight count mismatch");
    if (w.regime() == WeightRegime::GeOneSum && !allow_ge_one_sum)
        throw InvalidInput("set_hadamard_mean: ge-one-sum weights need matrix mode");
    const std::size_t dim = sets[0].dim();
    std::int64_t count = 1;
    for (const auto& s : sets) {
        if (s.dim() != dim) throw InvalidInput("set_hadamard_mean: dimension mismatch");
        count *= static_cast<std::int64_t>(s.size());
        charge(count, budget, "set_hadamard_mean");
    }
    std::vector<NonnegMatrix> acc;
    acc.push_back(NonnegMatrix::ones(dim));
    for (std::size_t l = 0; l < sets.size(); ++l) {
        if (w[l] == 0.0) continue; // zero-weight factor set drops out entirely
        std::vector<NonnegMatrix> next;
        next.reserve(acc.size() * sets[l].size());
        for (const auto& a : acc)
            for (const auto& b : sets[l].elements())
                next.push_back(hadamard_product(a, hadamard_power(b, w[l])));
        acc = std::move(next);
    }
    return MatrixSet(std::move(acc));
}

MatrixSet set_adjoint(const MatrixSet& s) {
    std::vector<NonnegMatrix> out;
    out.reserve(s.size());
    for (const auto& a : s.elements()) out.push_back(adjoint(a));
    return MatrixSet(std::move(out));
}

MatrixSet set_pair_symmetrize(const MatrixSet& p, const MatrixSet& q, AlphaValue alpha,
                              SetBudget budget) {
    require_same_dim(p, q, "set_pair_symmetrize");
    charge(static_cast<std::int64_t>(p.size()) * static_cast<std::int64_t>(q.size()), budget,
           "set_pair_symmetrize");
    const double al = alpha.value();
    std::vector<NonnegMatrix> out;
    out.reserve(p.size() * q.size());
    const std::size_t n = p.dim();
    for (const auto& a : p.elements())
        for (const auto& b : q.elements()) {
            NonnegMatrix r(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    r(i, j) = entry_pow(a(i, j), al) * entry_pow(b(j, i), 1.0 - al);
            out.push_back(std::move(r));
        }
    return MatrixSet(std::move(out));
}

MatrixSet set_symmetrize(const MatrixSet& s, AlphaValue alpha, SetBudget budget) {
    return set_pair_symmetrize(s, s, alpha, budget);
}

double set_functional_sup(const MatrixSet& s, FunctionalId f) {
    if (f == FunctionalId::SpectralRadius)
        throw InvalidInput("set_functional_sup: the spectral radius of a set is bracketed, not a sup");
    double best = 0.0;
    for (const auto& a : s.elements()) best = std::max(best, functional_value(f, a));
    return best;
}

bool contains_approx(const MatrixSet& s, const NonnegMatrix& m, double tol) {
    for (const auto& a : s.elements())
        if (approx_equal(a, m, tol)) return true;
    return false;
}

MatrixSet matrix_set_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("matrix-set JSON parse error: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("dim") || !doc.contains("matrices"))
        throw InvalidInput("matrix-set JSON needs \"dim\" and \"matrices\"");
    if (!doc["dim"].is_number_unsigned() || doc["dim"].get<std::uint64_t>() == 0)
        throw InvalidInput("matrix-set JSON: \"dim\" must be a positive integer");
    const auto dim = doc["dim"].get<std::size_t>();
    if (!doc["matrices"].is_array() || doc["matrices"].empty())
        throw InvalidInput("matrix-set JSON: \"matrices\" must be a nonempty array");
    std::vector<NonnegMatrix> elems;
    for (const auto& entry : doc["matrices"]) {
        if (!entry.is_array() || entry.size() != dim * dim)
            throw InvalidInput("matrix-set JSON: each matrix needs dim*dim row-major entries");
        std::vector<double> vals;
        vals.reserve(dim * dim);
        for (const auto& x : entry) {
            if (!x.is_number()) throw InvalidInput("matrix-set JSON: entries must be numbers");
            vals.push_back(x.get<double>());
        }
        elems.emplace_back(dim, std::move(vals));
    }
    return MatrixSet(std::move(elems));
}

std::string matrix_set_to_json(const MatrixSet& s) {
    nlohmann::json doc;
    doc["dim"] = s.dim();
    auto mats = nlohmann::json::array();
    for (const auto& m : s.elements())
        mats.push_back(std::vector<double>(m.entries().begin(), m.entries().end()));
    doc["matrices"] = std::move(mats);
    return doc.dump(2) + "\n";
}

MatrixSet load_matrix_set(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open matrix-set file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return matrix_set_from_json(buf.str());
}

} // namespace hjsr
