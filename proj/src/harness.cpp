#include "hjsr/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "hjsr/parallel.hpp"

namespace hjsr {

namespace {

using nlohmann::json;

constexpr double kExactEvalTol = 1e-12; // functional accuracy for exact-mode values

const std::map<TheoremId, std::string>& theorem_names() {
    static const std::map<TheoremId, std::string> names = {
        {TheoremId::EjsMean, "ejs-mean"},
        {TheoremId::MeanOfProducts, "mean-of-products"},
        {TheoremId::SetMeanProd, "set-mean-prod"},
        {TheoremId::SetMeanSum, "set-mean-sum"},
        {TheoremId::SymChainProd, "sym-chain-prod"},
        {TheoremId::SymChainSum, "sym-chain-sum"},
        {TheoremId::SymSingle, "sym-single"},
        {TheoremId::AlphaInclusion, "alpha-inclusion"},
        {TheoremId::SumProdLemma, "sum-prod-lemma"},
        {TheoremId::RhoN, "rho-n"},
        {TheoremId::RhoTildeN, "rho-tilde-n"},
        {TheoremId::RhoBarN, "rho-bar-n"},
        {TheoremId::WCounterexampleSearch, "w-counterexample-search"},
    };
    return names;
}

std::string status_name(TrialStatus s) {
    switch (s) {
        case TrialStatus::Pass: return "PASS";
        case TrialStatus::Violation: return "VIOLATION";
        case TrialStatus::Inconclusive: return "INCONCLUSIVE";
        case TrialStatus::Error: return "ERROR";
    }
    return "?";
}

// Aggregate link statuses; exploratory links never drive the trial verdict.
TrialStatus combine_links(const std::vector<LinkCheck>& links) {
    TrialStatus out = TrialStatus::Pass;
    for (const auto& l : links) {
        if (l.label.find("exploratory") != std::string::npos) continue;
        if (l.status == TrialStatus::Violation) return TrialStatus::Violation;
        if (l.status == TrialStatus::Error) out = TrialStatus::Error;
        if (l.status == TrialStatus::Inconclusive && out == TrialStatus::Pass)
            out = TrialStatus::Inconclusive;
    }
    return out;
}

json set_to_json(const MatrixSet& s) {
    json doc;
    doc["dim"] = s.dim();
    auto mats = json::array();
    for (const auto& m : s.elements())
        mats.push_back(std::vector<double>(m.entries().begin(), m.entries().end()));
    doc["matrices"] = std::move(mats);
    return doc;
}

json grid_to_json(const std::vector<std::vector<MatrixSet>>& grid) {
    auto rows = json::array();
    for (const auto& row : grid) {
        auto cols = json::array();
        for (const auto& s : row) cols.push_back(set_to_json(s));
        rows.push_back(std::move(cols));
    }
    return rows;
}

std::string dump_instance(const Instance& inst) {
    json doc;
    if (!inst.sets.empty()) {
        auto arr = json::array();
        for (const auto& s : inst.sets) arr.push_back(set_to_json(s));
        doc["sets"] = std::move(arr);
    }
    if (!inst.grid.empty()) doc["grid"] = grid_to_json(inst.grid);
    if (!inst.grid2.empty()) doc["grid2"] = grid_to_json(inst.grid2);
    if (inst.weights) {
        doc["weights"] = std::vector<double>(inst.weights->weights().begin(),
                                             inst.weights->weights().end());
        doc["regime"] =
            inst.weights->regime() == WeightRegime::UnitSum ? "unit-sum" : "ge-one-sum";
    }
    if (inst.alpha >= 0.0) doc["alpha"] = inst.alpha;
    if (inst.alpha_low1 >= 0.0) doc["alpha_low"] = {inst.alpha_low1, inst.alpha_low2};
    if (inst.alpha_high1 >= 0.0) doc["alpha_high"] = {inst.alpha_high1, inst.alpha_high2};
    return doc.dump();
}

LinkCheck make_link(std::string label, const Interval& lhs, const Interval& rhs, double tol) {
    LinkCheck lc;
    lc.label = std::move(label);
    lc.lhs_lower = lhs.lower;
    lc.lhs_upper = lhs.upper;
    lc.rhs_lower = rhs.lower;
    lc.rhs_upper = rhs.upper;
    lc.margin = (rhs.upper - lhs.lower) / std::max(1.0, rhs.upper);
    lc.status = check_leq(lhs, rhs, tol);
    return lc;
}

double pair_tol(const Interval& a, const Interval& b, const TrialConfig& cfg) {
    return (a.exact && b.exact) ? cfg.tol_exact() : cfg.tol_bracket();
}

MatrixSet chain_product(std::span<const MatrixSet> sets, bool reversed,
                        const EnumerationBudget&) {
    if (sets.empty()) throw InvalidInput("chain_product: empty chain");
    MatrixSet acc = reversed ? sets.back() : sets.front();
    for (std::size_t k = 1; k < sets.size(); ++k)
        acc = set_product(acc, reversed ? sets[sets.size() - 1 - k] : sets[k]);
    return acc;
}

Interval rho_power_product(std::span<const MatrixSet> sets, std::span<const double> exps,
                           RhoSelector rho, const EnumerationBudget& budget) {
    Interval out = interval_point(1.0);
    for (std::size_t j = 0; j < sets.size(); ++j)
        out = interval_mul(out, interval_pow(set_rho(sets[j], rho, budget), exps[j]));
    return out;
}

// Functionals applicable to a weighted-mean chain in the given weight regime.
std::vector<FunctionalId> applicable_functionals(WeightRegime regime) {
    if (regime == WeightRegime::UnitSum)
        return {FunctionalId::SpectralRadius, FunctionalId::OperatorNorm,
                FunctionalId::NumericalRadius};
    return {FunctionalId::SpectralRadius, FunctionalId::OperatorNorm};
}

std::string functional_label(FunctionalId f) {
    switch (f) {
        case FunctionalId::SpectralRadius: return "r";
        case FunctionalId::OperatorNorm: return "norm";
        case FunctionalId::NumericalRadius: return "w";
    }
    return "?";
}

Interval exact_point(FunctionalId f, const NonnegMatrix& m) {
    switch (f) {
        case FunctionalId::SpectralRadius: return interval_point(spectral_radius(m, kExactEvalTol));
        case FunctionalId::OperatorNorm: return interval_point(operator_norm(m, kExactEvalTol));
        case FunctionalId::NumericalRadius:
            return interval_point(numerical_radius(m, kExactEvalTol));
    }
    throw InvalidInput("unknown functional");
}

// Set-level selectors exercised by the set theorems: exact sups plus the
// shared enumeration bracket (one bracket covers both set radii).
struct SelectorPlan {
    RhoSelector rho;
    std::string label;
};

std::vector<SelectorPlan> set_selectors() {
    return {{RhoSelector::Norm, "norm"}, {RhoSelector::W, "w"}, {RhoSelector::R, "gsr-jsr"}};
}

} // namespace

std::string theorem_name(TheoremId t) { return theorem_names().at(t); }

TheoremId parse_theorem(const std::string& name) {
    for (const auto& [id, n] : theorem_names())
        if (n == name) return id;
    throw InvalidInput("unknown theorem id: " + name);
}

std::string rho_name(RhoSelector r) {
    switch (r) {
        case RhoSelector::R: return "r";
        case RhoSelector::Gsr: return "gsr";
        case RhoSelector::Jsr: return "jsr";
        case RhoSelector::Norm: return "norm";
        case RhoSelector::W: return "w";
    }
    return "?";
}

RhoSelector parse_rho(const std::string& name) {
    if (name == "r") return RhoSelector::R;
    if (name == "gsr") return RhoSelector::Gsr;
    if (name == "jsr") return RhoSelector::Jsr;
    if (name == "norm") return RhoSelector::Norm;
    if (name == "w") return RhoSelector::W;
    throw InvalidInput("unknown rho selector: " + name);
}

void TrialConfig::validate() const {
    if (dim < 1) throw InvalidInput("config: dim must be >= 1");
    if (set_size < 1) throw InvalidInput("config: set-size must be >= 1");
    if (n_factors < 1 || k_rows < 1 || m_cols < 1)
        throw InvalidInput("config: instance shape counts must be >= 1");
    if (!(density > 0.0 && density <= 1.0)) throw InvalidInput("config: density must be in (0,1]");
    if (trials < 1) throw InvalidInput("config: trials must be >= 1");
    if (alpha_steps < 2) throw InvalidInput("config: alpha-steps must be >= 2");
    if (budget.max_depth < 1) throw InvalidInput("config: depth must be >= 1");
    if (budget.max_products < 1) throw InvalidInput("config: max-products must be >= 1");
}

std::vector<double> alpha_grid(int steps) {
    if (steps < 2) throw InvalidInput("alpha grid needs at least two points");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i < steps; ++i)
        grid.push_back(static_cast<double>(i) / static_cast<double>(steps - 1));
    grid.push_back(0.5);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

NonnegMatrix random_matrix(SampleStream& rng, std::size_t dim, double density) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<double> entries(dim * dim);
        bool any = false;
        for (auto& x : entries) {
            const double v = rng.exponential();
            const double keep = rng.uniform01();
            x = keep < density ? v : 0.0;
            any = any || x != 0.0;
        }
        if (any) return NonnegMatrix(dim, std::move(entries));
    }
    throw NumericalFailure("random_matrix: mask produced only zero matrices");
}

MatrixSet random_set(SampleStream& rng, std::size_t dim, std::size_t set_size, double density) {
    std::vector<NonnegMatrix> elems;
    elems.reserve(set_size);
    for (std::size_t k = 0; k < set_size; ++k) elems.push_back(random_matrix(rng, dim, density));
    return MatrixSet(std::move(elems));
}

WeightVector random_weights(SampleStream& rng, std::size_t m, WeightRegime regime) {
    std::vector<double> w(m);
    double sum = 0.0;
    for (auto& x : w) {
        x = rng.exponential();
        sum += x;
    }
    // Exp(1) draws normalized over their sum: flat on the simplex.
    const double target = regime == WeightRegime::UnitSum ? 1.0 : rng.uniform(1.0, 3.0);
    for (auto& x : w) x = x / sum * target;
    return WeightVector(std::move(w), regime);
}

Instance random_instance(TheoremId t, const TrialConfig& cfg, std::uint64_t seed) {
    SampleStream rng(seed);
    Instance inst;
    auto singleton_row = [&](std::size_t count) {
        std::vector<MatrixSet> row;
        row.reserve(count);
        for (std::size_t j = 0; j < count; ++j)
            row.push_back(MatrixSet::singleton(random_matrix(rng, cfg.dim, cfg.density)));
        return row;
    };
    auto set_row = [&](std::size_t count) {
        std::vector<MatrixSet> row;
        row.reserve(count);
        for (std::size_t j = 0; j < count; ++j)
            row.push_back(random_set(rng, cfg.dim, cfg.set_size, cfg.density));
        return row;
    };
    switch (t) {
        case TheoremId::EjsMean:
        case TheoremId::WCounterexampleSearch: {
            inst.sets = singleton_row(static_cast<std::size_t>(cfg.m_cols));
            const auto regime =
                t == TheoremId::WCounterexampleSearch ? WeightRegime::GeOneSum : cfg.regime;
            inst.weights = random_weights(rng, static_cast<std::size_t>(cfg.m_cols), regime);
            break;
        }
        case TheoremId::MeanOfProducts: {
            for (int i = 0; i < cfg.k_rows; ++i)
                inst.grid.push_back(singleton_row(static_cast<std::size_t>(cfg.m_cols)));
            inst.weights =
                random_weights(rng, static_cast<std::size_t>(cfg.m_cols), WeightRegime::UnitSum);
            break;
        }
        case TheoremId::SetMeanProd:
        case TheoremId::SetMeanSum: {
            for (int i = 0; i < cfg.k_rows; ++i)
                inst.grid.push_back(set_row(static_cast<std::size_t>(cfg.m_cols)));
            inst.weights =
                random_weights(rng, static_cast<std::size_t>(cfg.m_cols), WeightRegime::UnitSum);
            break;
        }
        case TheoremId::SymChainProd:
        case TheoremId::SymChainSum:
        case TheoremId::RhoN:
        case TheoremId::RhoTildeN: {
            inst.sets = set_row(static_cast<std::size_t>(cfg.n_factors));
            inst.alpha = rng.uniform01();
            break;
        }
        case TheoremId::SymSingle:
        case TheoremId::AlphaInclusion: {
            inst.sets = set_row(1);
            inst.alpha = rng.uniform01();
            inst.alpha_low1 = rng.uniform(0.0, 0.5);
            inst.alpha_low2 = rng.uniform(0.0, 0.5);
            if (inst.alpha_low2 < inst.alpha_low1) std::swap(inst.alpha_low1, inst.alpha_low2);
            inst.alpha_high1 = rng.uniform(0.5, 1.0);
            inst.alpha_high2 = rng.uniform(0.5, 1.0);
            if (inst.alpha_high2 < inst.alpha_high1)
                std::swap(inst.alpha_high1, inst.alpha_high2);
            break;
        }
        case TheoremId::SumProdLemma: {
            for (int i = 0; i < cfg.k_rows; ++i) {
                inst.grid.push_back(set_row(static_cast<std::size_t>(cfg.m_cols)));
                inst.grid2.push_back(set_row(static_cast<std::size_t>(cfg.m_cols)));
            }
            inst.alpha = rng.uniform01();
            break;
        }
        case TheoremId::RhoBarN: {
            for (int i = 0; i < cfg.n_factors; ++i)
                inst.grid.push_back(set_row(static_cast<std::size_t>(cfg.m_cols)));
            break;
        }
    }
    return inst;
}

Interval set_rho(const MatrixSet& s, RhoSelector rho, const EnumerationBudget& budget) {
    switch (rho) {
        case RhoSelector::Norm: {
            double best = 0.0;
            for (const auto& a : s.elements())
                best = std::max(best, operator_norm(a, kExactEvalTol));
            return interval_point(best);
        }
        case RhoSelector::W: {
            double best = 0.0;
            for (const auto& a : s.elements())
                best = std::max(best, numerical_radius(a, kExactEvalTol));
            return interval_point(best);
        }
        default: break;
    }
    if (s.size() == 1) {
        const PerronBracket b = spectral_radius_bracket(s[0], kExactEvalTol);
        return {b.lower, b.upper, true, false};
    }
    const auto kind =
        rho == RhoSelector::Jsr ? SetRadiusKind::Joint : SetRadiusKind::Generalized;
    return radius_bracket(s, kind, budget).interval();
}

TrialStatus check_leq(const Interval& lhs, const Interval& rhs, double tol) {
    if (lhs.partial || rhs.partial) return TrialStatus::Inconclusive;
    if (lhs.lower > rhs.upper * (1.0 + tol) + tol) return TrialStatus::Violation;
    return TrialStatus::Pass;
}

TrialResult check_weighted_mean(TheoremId t, const Instance& inst, const TrialConfig& cfg) {
    TrialResult res;
    const WeightVector& w = *inst.weights;
    if (t == TheoremId::MeanOfProducts) {
        const auto& grid = inst.grid;
        const std::size_t k = grid.size(), m = grid[0].size();
        std::vector<NonnegMatrix> row_means;
        for (std::size_t i = 0; i < k; ++i) {
            std::vector<NonnegMatrix> row;
            for (std::size_t j = 0; j < m; ++j) row.push_back(grid[i][j][0]);
            row_means.push_back(weighted_geometric_mean(row, w));
        }
        NonnegMatrix chain = row_means[0];
        for (std::size_t i = 1; i < k; ++i) chain = multiply(chain, row_means[i]);
        std::vector<NonnegMatrix> col_products;
        for (std::size_t j = 0; j < m; ++j) {
            NonnegMatrix p = grid[0][j][0];
            for (std::size_t i = 1; i < k; ++i) p = multiply(p, grid[i][j][0]);
            col_products.push_back(std::move(p));
        }
        const NonnegMatrix mid = weighted_geometric_mean(col_products, w);
        for (FunctionalId f : applicable_functionals(WeightRegime::UnitSum)) {
            const Interval lv = exact_point(f, chain);
            const Interval mv = exact_point(f, mid);
            Interval rv = interval_point(1.0);
            for (std::size_t j = 0; j < m; ++j)
                rv = interval_mul(rv, interval_pow(exact_point(f, col_products[j]), w[j]));
            res.links.push_back(
                make_link(functional_label(f) + ": chain<=mid", lv, mv, cfg.tol_exact()));
            res.links.push_back(
                make_link(functional_label(f) + ": mid<=prod", mv, rv, cfg.tol_exact()));
        }
    } else {
        std::vector<NonnegMatrix> factors;
        for (const auto& s : inst.sets) factors.push_back(s[0]);
        const NonnegMatrix mean = weighted_geometric_mean(factors, w);
        for (FunctionalId f : applicable_functionals(w.regime())) {
            const Interval lv = exact_point(f, mean);
            Interval rv = interval_point(1.0);
            for (std::size_t j = 0; j < factors.size(); ++j)
                rv = interval_mul(rv, interval_pow(exact_point(f, factors[j]), w[j]));
            res.links.push_back(
                make_link(functional_label(f) + ": mean<=prod", lv, rv, cfg.tol_exact()));
        }
        if (t == TheoremId::WCounterexampleSearch) {
            const Interval lv = exact_point(FunctionalId::NumericalRadius, mean);
            Interval rv = interval_point(1.0);
            for (std::size_t j = 0; j < factors.size(); ++j)
                rv = interval_mul(rv, interval_pow(
                                          exact_point(FunctionalId::NumericalRadius, factors[j]),
                                          w[j]));
            LinkCheck probe = make_link("w (exploratory)", lv, rv, cfg.tol_exact());
            if (probe.status == TrialStatus::Violation)
                res.note = "w inequality fails for this ge-one-sum instance";
            res.links.push_back(std::move(probe));
        }
    }
    res.status = combine_links(res.links);
    return res;
}

TrialResult check_set_mean(TheoremId t, const Instance& inst, const TrialConfig& cfg) {
    TrialResult res;
    const WeightVector& w = *inst.weights;
    const auto& grid = inst.grid;
    const std::size_t k = grid.size(), m = grid[0].size();

    std::vector<MatrixSet> row_means;
    for (std::size_t i = 0; i < k; ++i)
        row_means.push_back(set_hadamard_mean(grid[i], w));

    MatrixSet lhs = row_means[0];
    std::vector<MatrixSet> col_combined;
    if (t == TheoremId::SetMeanProd) {
        for (std::size_t i = 1; i < k; ++i) lhs = set_product(lhs, row_means[i]);
        for (std::size_t j = 0; j < m; ++j) {
            MatrixSet p = grid[0][j];
            for (std::size_t i = 1; i < k; ++i) p = set_product(p, grid[i][j]);
            col_combined.push_back(std::move(p));
        }
    } else {
        lhs = set_sum(row_means);
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<MatrixSet> col;
            for (std::size_t i = 0; i < k; ++i) col.push_back(grid[i][j]);
            col_combined.push_back(set_sum(col));
        }
    }
    const MatrixSet mid = set_hadamard_mean(col_combined, w);

    for (const auto& sel : set_selectors()) {
        const Interval lv = set_rho(lhs, sel.rho, cfg.budget);
        const Interval mv = set_rho(mid, sel.rho, cfg.budget);
        const Interval rv =
            rho_power_product(col_combined, w.weights(), sel.rho, cfg.budget);
        res.links.push_back(
            make_link(sel.label + ": chain<=mid", lv, mv, pair_tol(lv, mv, cfg)));
        res.links.push_back(
            make_link(sel.label + ": mid<=prod", mv, rv, pair_tol(mv, rv, cfg)));
    }
    res.status = combine_links(res.links);
    return res;
}

TrialResult check_symmetrization_chain(TheoremId t, const Instance& inst,
                                       const TrialConfig& cfg) {
    TrialResult res;
    const AlphaValue alpha(inst.alpha);
    const auto& sets = inst.sets;

    if (t == TheoremId::SymSingle) {
        const MatrixSet sym = set_symmetrize(sets[0], alpha);
        for (const auto& sel : set_selectors()) {
            const Interval lv = set_rho(sym, sel.rho, cfg.budget);
            const Interval rv = set_rho(sets[0], sel.rho, cfg.budget);
            res.links.push_back(
                make_link(sel.label + ": sym<=set", lv, rv, pair_tol(lv, rv, cfg)));
        }
    } else if (t == TheoremId::SymChainProd) {
        std::vector<MatrixSet> sym;
        for (const auto& s : sets) sym.push_back(set_symmetrize(s, alpha));
        const MatrixSet lhs = chain_product(sym, false, cfg.budget);
        const MatrixSet fwd = chain_product(sets, false, cfg.budget);
        const MatrixSet rev = chain_product(sets, true, cfg.budget);
        const MatrixSet mid = set_pair_symmetrize(fwd, rev, alpha);
        for (const auto& sel : set_selectors()) {
            const Interval lv = set_rho(lhs, sel.rho, cfg.budget);
            const Interval mv = set_rho(mid, sel.rho, cfg.budget);
            const Interval rv = interval_mul(
                interval_pow(set_rho(fwd, sel.rho, cfg.budget), inst.alpha),
                interval_pow(set_rho(rev, sel.rho, cfg.budget), 1.0 - inst.alpha));
            res.links.push_back(
                make_link(sel.label + ": chain<=mid", lv, mv, pair_tol(lv, mv, cfg)));
            res.links.push_back(
                make_link(sel.label + ": mid<=prod", mv, rv, pair_tol(mv, rv, cfg)));
        }
    } else { // SymChainSum
        std::vector<MatrixSet> sym;
        for (const auto& s : sets) sym.push_back(set_symmetrize(s, alpha));
        const MatrixSet lhs = set_sum(sym);
        const MatrixSet total = set_sum(sets);
        const MatrixSet mid = set_symmetrize(total, alpha);
        for (const auto& sel : set_selectors()) {
            const Interval lv = set_rho(lhs, sel.rho, cfg.budget);
            const Interval mv = set_rho(mid, sel.rho, cfg.budget);
            const Interval rv = set_rho(total, sel.rho, cfg.budget);
            res.links.push_back(
                make_link(sel.label + ": sum<=mid", lv, mv, pair_tol(lv, mv, cfg)));
            res.links.push_back(
                make_link(sel.label + ": mid<=sum", mv, rv, pair_tol(mv, rv, cfg)));
        }
    }
    res.status = combine_links(res.links);
    return res;
}

namespace {

constexpr double kMembershipTol = 1e-12;

LinkCheck inclusion_link(const MatrixSet& psi, double a1, double a2, bool low_branch) {
    LinkCheck lc;
    lc.label = low_branch ? "inclusion [0,1/2]" : "inclusion [1/2,1]";
    if (a1 == a2) {
        lc.status = TrialStatus::Pass;
        lc.margin = 0.0;
        return lc;
    }
    const double denom = low_branch ? 2.0 * a1 - 1.0 : 2.0 * a2 - 1.0;
    const double alpha = (a1 + a2 - 1.0) / denom;
    if (!(alpha > 0.0 && alpha < 1.0)) {
        lc.status = TrialStatus::Error;
        return lc;
    }
    const MatrixSet inner =
        set_symmetrize(psi, AlphaValue(low_branch ? a1 : a2));
    const MatrixSet outer = set_symmetrize(inner, AlphaValue(alpha));
    const MatrixSet member = set_symmetrize(psi, AlphaValue(low_branch ? a2 : a1));
    for (const auto& m : member.elements())
        if (!contains_approx(outer, m, kMembershipTol)) {
            lc.status = TrialStatus::Violation;
            return lc;
        }
    lc.status = TrialStatus::Pass;
    return lc;
}

} // namespace

TrialResult check_alpha_inclusion(const Instance& inst, const TrialConfig&) {
    TrialResult res;
    const MatrixSet& psi = inst.sets[0];
    res.links.push_back(inclusion_link(psi, inst.alpha_low1, inst.alpha_low2, true));
    res.links.push_back(inclusion_link(psi, inst.alpha_high1, inst.alpha_high2, false));
    res.status = combine_links(res.links);
    return res;
}

TrialResult check_sum_prod_lemma(const Instance& inst, const TrialConfig& cfg) {
    TrialResult res;
    const double alpha = inst.alpha;
    const WeightVector pair({alpha, 1.0 - alpha}, WeightRegime::UnitSum);
    const auto& psi = inst.grid;
    const auto& sigma = inst.grid2;
    const std::size_t n = psi.size(), m = psi[0].size();

    auto mean2 = [&](const MatrixSet& p, const MatrixSet& q) {
        const MatrixSet arr[] = {p, q};
        return set_hadamard_mean(arr, pair);
    };

    std::vector<MatrixSet> lhs_rows, rhs_rows;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<MatrixSet> terms;
        for (std::size_t j = 0; j < m; ++j) terms.push_back(mean2(psi[i][j], sigma[i][j]));
        lhs_rows.push_back(set_sum(terms));
        rhs_rows.push_back(mean2(set_sum(psi[i]), set_sum(sigma[i])));
    }
    const MatrixSet lhs = chain_product(lhs_rows, false, cfg.budget);
    const MatrixSet rhs = chain_product(rhs_rows, false, cfg.budget);

    std::vector<MatrixSet> cor_lhs_rows, cor_rhs_rows;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<MatrixSet> terms;
        for (std::size_t j = 0; j < m; ++j)
            terms.push_back(set_symmetrize(psi[i][j], AlphaValue(alpha)));
        cor_lhs_rows.push_back(set_sum(terms));
        cor_rhs_rows.push_back(set_symmetrize(set_sum(psi[i]), AlphaValue(alpha)));
    }
    const MatrixSet cor_lhs = chain_product(cor_lhs_rows, false, cfg.budget);
    const MatrixSet cor_rhs = chain_product(cor_rhs_rows, false, cfg.budget);

    for (const auto& sel : set_selectors()) {
        const Interval lv = set_rho(lhs, sel.rho, cfg.budget);
        const Interval rv = set_rho(rhs, sel.rho, cfg.budget);
        res.links.push_back(
            make_link(sel.label + ": lemma", lv, rv, pair_tol(lv, rv, cfg)));
        const Interval clv = set_rho(cor_lhs, sel.rho, cfg.budget);
        const Interval crv = set_rho(cor_rhs, sel.rho, cfg.budget);
        res.links.push_back(
            make_link(sel.label + ": corollary", clv, crv, pair_tol(clv, crv, cfg)));
    }
    res.status = combine_links(res.links);
    return res;
}

namespace {

// Shared monotonicity/min-at-half verdict logic for the three curve families.
void grade_curve(AlphaCurve& curve, const TrialConfig& cfg) {
    const auto& pts = curve.points;
    curve.min_margin = std::numeric_limits<double>::infinity();
    auto claim = [&](std::size_t li, std::size_t ri) {
        const double tol = pair_tol(pts[li].value, pts[ri].value, cfg);
        curve.min_margin =
            std::min(curve.min_margin, (pts[ri].value.upper - pts[li].value.lower) /
                                           std::max(1.0, pts[ri].value.upper));
        return check_leq(pts[li].value, pts[ri].value, tol);
    };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const bool down = pts[i + 1].alpha <= 0.5;
        const TrialStatus st = down ? claim(i + 1, i) : claim(i, i + 1);
        if (st == TrialStatus::Violation) curve.monotone_ok = false;
        if (st == TrialStatus::Inconclusive) ++curve.inconclusive_pairs;
    }
    std::size_t half = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (pts[i].alpha == 0.5) half = i;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const TrialStatus st = claim(half, i);
        if (st == TrialStatus::Violation) curve.min_at_half = false;
        if (st == TrialStatus::Inconclusive) ++curve.inconclusive_pairs;
    }
}

} // namespace

AlphaCurve scan_rho_n(std::span<const MatrixSet> factors, RhoSelector rho,
                      const TrialConfig& cfg) {
    const std::vector<double> grid = alpha_grid(cfg.alpha_steps);
    AlphaCurve curve;
    curve.points.resize(grid.size());
#ifdef _OPENMP
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic)
#endif
    for (std::int64_t g = 0; g < static_cast<std::int64_t>(grid.size()); ++g) {
        const AlphaValue alpha(grid[static_cast<std::size_t>(g)]);
        std::vector<MatrixSet> sym;
        sym.reserve(factors.size());
        for (const auto& s : factors) sym.push_back(set_symmetrize(s, alpha));
        const MatrixSet fwd = chain_product(sym, false, cfg.budget);
        const MatrixSet rev = chain_product(sym, true, cfg.budget);
        const Interval v = interval_sqrt(interval_mul(set_rho(fwd, rho, cfg.budget),
                                                      set_rho(rev, rho, cfg.budget)));
        curve.points[static_cast<std::size_t>(g)] = {alpha.value(), v};
    }
    grade_curve(curve, cfg);
    return curve;
}

AlphaCurve scan_rho_tilde_n(std::span<const MatrixSet> factors, RhoSelector rho,
                            const TrialConfig& cfg) {
    const std::vector<double> grid = alpha_grid(cfg.alpha_steps);
    AlphaCurve curve;
    curve.points.resize(grid.size());
#ifdef _OPENMP
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic)
#endif
    for (std::int64_t g = 0; g < static_cast<std::int64_t>(grid.size()); ++g) {
        const AlphaValue alpha(grid[static_cast<std::size_t>(g)]);
        std::vector<MatrixSet> sym;
        sym.reserve(factors.size());
        for (const auto& s : factors) sym.push_back(set_symmetrize(s, alpha));
        curve.points[static_cast<std::size_t>(g)] = {
            alpha.value(), set_rho(set_sum(sym), rho, cfg.budget)};
    }
    grade_curve(curve, cfg);
    return curve;
}

AlphaCurve scan_rho_bar_n(const std::vector<std::vector<MatrixSet>>& grid_sets,
                          RhoSelector rho, const TrialConfig& cfg) {
    const std::vector<double> grid = alpha_grid(cfg.alpha_steps);
    AlphaCurve curve;
    curve.points.resize(grid.size());
#ifdef _OPENMP
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic)
#endif
    for (std::int64_t g = 0; g < static_cast<std::int64_t>(grid.size()); ++g) {
        const AlphaValue alpha(grid[static_cast<std::size_t>(g)]);
        std::vector<MatrixSet> rows;
        rows.reserve(grid_sets.size());
        for (const auto& row : grid_sets) {
            std::vector<MatrixSet> sym;
            sym.reserve(row.size());
            for (const auto& s : row) sym.push_back(set_symmetrize(s, alpha));
            rows.push_back(set_sum(sym));
        }
        const MatrixSet fwd = chain_product(rows, false, cfg.budget);
        const MatrixSet rev = chain_product(rows, true, cfg.budget);
        curve.points[static_cast<std::size_t>(g)] = {
            alpha.value(), interval_sqrt(interval_mul(set_rho(fwd, rho, cfg.budget),
                                                      set_rho(rev, rho, cfg.budget)))};
    }
    grade_curve(curve, cfg);

    // Upper bound against the unsymmetrized row sums, uniform in alpha.
    std::vector<MatrixSet> plain_rows;
    plain_rows.reserve(grid_sets.size());
    for (const auto& row : grid_sets) plain_rows.push_back(set_sum(row));
    const MatrixSet fwd = chain_product(plain_rows, false, cfg.budget);
    const MatrixSet rev = chain_product(plain_rows, true, cfg.budget);
    const Interval bound = interval_sqrt(interval_mul(set_rho(fwd, rho, cfg.budget),
                                                      set_rho(rev, rho, cfg.budget)));
    for (const auto& p : curve.points) {
        const TrialStatus st = check_leq(p.value, bound, pair_tol(p.value, bound, cfg));
        if (st == TrialStatus::Violation) curve.cute_consistent = false;
        if (st == TrialStatus::Inconclusive) ++curve.inconclusive_pairs;
    }
    return curve;
}

namespace {

TrialResult scan_trial(TheoremId t, const Instance& inst, const TrialConfig& cfg) {
    TrialResult res;
    for (const auto& sel : set_selectors()) {
        AlphaCurve curve;
        if (t == TheoremId::RhoN)
            curve = scan_rho_n(inst.sets, sel.rho, cfg);
        else if (t == TheoremId::RhoTildeN)
            curve = scan_rho_tilde_n(inst.sets, sel.rho, cfg);
        else
            curve = scan_rho_bar_n(inst.grid, sel.rho, cfg);

        LinkCheck mono;
        mono.label = sel.label + ": monotone";
        mono.status = curve.monotone_ok
                          ? (curve.inconclusive_pairs > 0 ? TrialStatus::Inconclusive
                                                          : TrialStatus::Pass)
                          : TrialStatus::Violation;
        res.links.push_back(mono);

        LinkCheck half;
        half.label = sel.label + ": min-at-half";
        half.status = curve.min_at_half ? TrialStatus::Pass : TrialStatus::Violation;
        res.links.push_back(half);

        if (t == TheoremId::RhoBarN) {
            LinkCheck cute;
            cute.label = sel.label + ": sum-bound";
            cute.status = curve.cute_consistent ? TrialStatus::Pass : TrialStatus::Violation;
            res.links.push_back(cute);
        }
    }
    res.status = combine_links(res.links);
    return res;
}

TrialResult run_trial(TheoremId t, const Instance& inst, const TrialConfig& cfg) {
    switch (t) {
        case TheoremId::EjsMean:
        case TheoremId::MeanOfProducts:
        case TheoremId::WCounterexampleSearch: return check_weighted_mean(t, inst, cfg);
        case TheoremId::SetMeanProd:
        case TheoremId::SetMeanSum: return check_set_mean(t, inst, cfg);
        case TheoremId::SymChainProd:
        case TheoremId::SymChainSum:
        case TheoremId::SymSingle: return check_symmetrization_chain(t, inst, cfg);
        case TheoremId::AlphaInclusion: return check_alpha_inclusion(inst, cfg);
        case TheoremId::SumProdLemma: return check_sum_prod_lemma(inst, cfg);
        case TheoremId::RhoN:
        case TheoremId::RhoTildeN:
        case TheoremId::RhoBarN: return scan_trial(t, inst, cfg);
    }
    throw InvalidInput("unknown theorem");
}

} // namespace

VerificationReport run_verification(TheoremId t, const TrialConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    VerificationReport report;
    report.theorem = t;
    report.config = cfg;
    report.trials.resize(static_cast<std::size_t>(cfg.trials));

#ifdef _OPENMP
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic)
#endif
    for (std::int64_t i = 0; i < cfg.trials; ++i) {
        const std::uint64_t seed = trial_seed(cfg.seed, static_cast<std::uint64_t>(i));
        TrialResult res;
        try {
            const Instance inst = random_instance(t, cfg, seed);
            res = run_trial(t, inst, cfg);
            if (res.status == TrialStatus::Violation) res.counterexample = dump_instance(inst);
        } catch (const std::exception& e) {
            res.status = TrialStatus::Error;
            res.note = e.what();
        }
        res.index = static_cast<int>(i);
        res.seed = seed;
        report.trials[static_cast<std::size_t>(i)] = std::move(res);
    }

    for (const auto& tr : report.trials) {
        switch (tr.status) {
            case TrialStatus::Pass: ++report.passed; break;
            case TrialStatus::Violation: ++report.violations; break;
            case TrialStatus::Inconclusive: ++report.inconclusive; break;
            case TrialStatus::Error: ++report.errors; break;
        }
        if (!tr.note.empty() && tr.status != TrialStatus::Error) ++report.findings;
    }
    if (report.violations > 0)
        report.overall = TrialStatus::Violation;
    else if (report.errors > 0)
        report.overall = TrialStatus::Error;
    else if (report.passed == 0 && report.inconclusive > 0)
        report.overall = TrialStatus::Inconclusive;
    else
        report.overall = TrialStatus::Pass;
    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return report;
}

namespace {

json config_to_json(const TrialConfig& cfg) {
    json c;
    c["dim"] = cfg.dim;
    c["set_size"] = cfg.set_size;
    c["n_factors"] = cfg.n_factors;
    c["k_rows"] = cfg.k_rows;
    c["m_cols"] = cfg.m_cols;
    c["density"] = cfg.density;
    c["seed"] = cfg.seed;
    c["trials"] = cfg.trials;
    c["tol_exact"] = cfg.tol_exact();
    c["tol_bracket"] = cfg.tol_bracket();
    c["alpha_steps"] = cfg.alpha_steps;
    c["regime"] = cfg.regime == WeightRegime::UnitSum ? "unit-sum" : "ge-one-sum";
    c["depth"] = cfg.budget.max_depth;
    c["max_products"] = cfg.budget.max_products;
    c["prune"] = cfg.budget.prune;
    return c;
}

} // namespace

std::string report_to_json(const VerificationReport& report) {
    json doc;
    doc["theorem"] = theorem_name(report.theorem);
    doc["config"] = config_to_json(report.config);
    doc["summary"] = {{"passed", report.passed},
                      {"violations", report.violations},
                      {"inconclusive", report.inconclusive},
                      {"errors", report.errors},
                      {"findings", report.findings},
                      {"overall", status_name(report.overall)}};
    auto trials = json::array();
    for (const auto& tr : report.trials) {
        json t;
        t["trial"] = tr.index;
        t["seed"] = tr.seed;
        t["status"] = status_name(tr.status);
        auto links = json::array();
        for (const auto& l : tr.links) {
            links.push_back({{"label", l.label},
                             {"lhs", {l.lhs_lower, l.lhs_upper}},
                             {"rhs", {l.rhs_lower, l.rhs_upper}},
                             {"margin", l.margin},
                             {"status", status_name(l.status)}});
        }
        t["links"] = std::move(links);
        if (!tr.note.empty()) t["note"] = tr.note;
        if (!tr.counterexample.empty()) t["counterexample"] = json::parse(tr.counterexample);
        trials.push_back(std::move(t));
    }
    doc["trials"] = std::move(trials);
    return doc.dump(2) + "\n";
}

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string curve_to_csv(const AlphaCurve& curve) {
    std::ostringstream out;
    out << "alpha,lower,upper,exact,segment,verdict\n";
    const std::string verdict = curve.monotone_ok ? "MONOTONE_OK" : "VIOLATION";
    for (const auto& p : curve.points) {
        const char* segment =
            p.alpha < 0.5 ? "decreasing" : (p.alpha == 0.5 ? "half" : "increasing");
        out << fmt17(p.alpha) << ',' << fmt17(p.value.lower) << ',' << fmt17(p.value.upper)
            << ',' << (p.value.exact ? fmt17(0.5 * (p.value.lower + p.value.upper)) : "")
            << ',' << segment << ',' << verdict << '\n';
    }
    return out.str();
}

std::string curve_to_json(const AlphaCurve& curve) {
    json doc;
    auto pts = json::array();
    for (const auto& p : curve.points) {
        json q;
        q["alpha"] = p.alpha;
        q["lower"] = p.value.lower;
        q["upper"] = p.value.upper;
        q["exact"] = p.value.exact;
        q["partial"] = p.value.partial;
        pts.push_back(std::move(q));
    }
    doc["points"] = std::move(pts);
    doc["verdict"] = curve.monotone_ok ? "MONOTONE_OK" : "VIOLATION";
    doc["min_at_half"] = curve.min_at_half;
    doc["inconclusive_pairs"] = curve.inconclusive_pairs;
    doc["sum_bound_consistent"] = curve.cute_consistent;
    return doc.dump(2) + "\n";
}

} // namespace hjsr
