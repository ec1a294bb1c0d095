#include "hjsr/jsr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "hjsr/parallel.hpp"

namespace hjsr {

namespace {

constexpr double kEvalTol = 1e-10; // functional accuracy inside the engine

struct Item {
    NonnegMatrix m;
    double sum = 0.0;     // total entry mass, used to order pruning
    double ub_r = 0.0;    // min(max row sum, max col sum) >= r
    double lb_r = 0.0;    // max diagonal entry <= r
    double ub_norm = 0.0; // sqrt(||.||_1 ||.||_inf) >= sigma_max
};

Item make_item(NonnegMatrix m) {
    Item it;
    const double rs = max_row_sum(m), cs = max_col_sum(m);
    it.sum = 0.0;
    for (double x : m.entries()) it.sum += x;
    it.ub_r = std::min(rs, cs);
    it.lb_r = max_diag(m);
    it.ub_norm = std::sqrt(rs * cs);
    it.m = std::move(m);
    return it;
}

// Quantized hash key (1e-12 granularity) used for bucketing only; bucket
// members are re-verified by exact comparison before a duplicate is dropped.
std::uint64_t quantized_hash(const NonnegMatrix& m) {
    std::uint64_t h = 1469598103934665603ull;
    for (double x : m.entries()) {
        const double q = x * 1e12;
        const std::int64_t k =
            q >= 9.2e18 ? std::numeric_limits<std::int64_t>::max() : std::llround(q);
        std::uint64_t bits = static_cast<std::uint64_t>(k);
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffu;
            h *= 1099511628211ull;
        }
    }
    return h;
}

void dedup_exact(std::vector<Item>& items) {
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
    buckets.reserve(items.size() * 2);
    std::vector<Item> kept;
    kept.reserve(items.size());
    for (auto& it : items) {
        const std::uint64_t h = quantized_hash(it.m);
        auto& bucket = buckets[h];
        bool dup = false;
        for (std::size_t idx : bucket)
            if (kept[idx].m == it.m) {
                dup = true;
                break;
            }
        if (!dup) {
            bucket.push_back(kept.size());
            kept.push_back(std::move(it));
        }
    }
    items = std::move(kept);
}

// Keep only entrywise-maximal products.  Sound for both bounds: entrywise
// order survives multiplication by nonnegative matrices and r, sigma_max are
// monotone, so a dominated product never attains a depth maximum.
void prune_dominated(std::vector<Item>& items) {
    constexpr std::size_t kPruneLimit = 4096; // quadratic scan guard
    if (items.size() < 2 || items.size() > kPruneLimit) return;
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.sum != b.sum) return a.sum > b.sum;
        return lex_less(b.m, a.m);
    });
    std::vector<Item> front;
    front.reserve(items.size());
    for (auto& it : items) {
        bool dominated = false;
        for (const auto& f : front)
            if (entrywise_leq(it.m, f.m)) {
                dominated = true;
                break;
            }
        if (!dominated) front.push_back(std::move(it));
    }
    items = std::move(front);
}

// Certified lower bound for max r over the items, tight to kEvalTol.
// Screens with the row/column-sum upper bound so only contenders pay for an
// exact evaluation; the result does not depend on evaluation order.
double depth_max_r_lower(const std::vector<Item>& items) {
    std::vector<std::size_t> order(items.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (items[a].ub_r != items[b].ub_r) return items[a].ub_r > items[b].ub_r;
        return a < b;
    });
    double best = 0.0;
    for (const auto& it : items) best = std::max(best, it.lb_r);
    constexpr std::size_t kBatch = 32;
    std::vector<double> lows(kBatch);
    for (std::size_t pos = 0; pos < order.size(); pos += kBatch) {
        if (items[order[pos]].ub_r <= best) break;
        const std::size_t end = std::min(pos + kBatch, order.size());
#ifdef _OPENMP
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic) if (end - pos > 8)
#endif
        for (std::int64_t k = static_cast<std::int64_t>(pos); k < static_cast<std::int64_t>(end); ++k) {
            const Item& it = items[order[k]];
            lows[static_cast<std::size_t>(k) - pos] = it.ub_r <= best ? 0.0
                                            : spectral_radius_bracket(it.m, kEvalTol).lower;
        }
        for (std::size_t k = pos; k < end; ++k) best = std::max(best, lows[static_cast<std::size_t>(k) - pos]);
    }
    return best;
}

// Certified upper bound for max sigma_max over the items, tight to kEvalTol.
double depth_max_norm_upper(const std::vector<Item>& items) {
    std::vector<std::size_t> order(items.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (items[a].ub_norm != items[b].ub_norm) return items[a].ub_norm > items[b].ub_norm;
        return a < b;
    });
    double best = 0.0;
    constexpr std::size_t kBatch = 32;
    std::vector<double> ups(kBatch);
    for (std::size_t pos = 0; pos < order.size(); pos += kBatch) {
        if (items[order[pos]].ub_norm <= best) break;
        const std::size_t end = std::min(pos + kBatch, order.size());
#ifdef _OPENMP
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic) if (end - pos > 8)
#endif
        for (std::int64_t k = static_cast<std::int64_t>(pos); k < static_cast<std::int64_t>(end); ++k) {
            const Item& it = items[order[k]];
            ups[static_cast<std::size_t>(k) - pos] = it.ub_norm <= best ? 0.0 : operator_norm_bracket(it.m, kEvalTol).upper;
        }
        for (std::size_t k = pos; k < end; ++k) best = std::max(best, ups[static_cast<std::size_t>(k) - pos]);
    }
    return best;
}

double depth_root(double v, int m) {
    if (v <= 0.0) return 0.0;
    return std::exp(std::log(v) / static_cast<double>(m));
}

struct EnginePass {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    int depth_reached = 1;
    bool partial = false;
};

EnginePass enumerate(const MatrixSet& s, const EnumerationBudget& budget, bool want_lower,
                     bool want_upper, bool tighten_singleton) {
    if (budget.max_depth < 1) throw InvalidInput("enumeration depth must be >= 1");
    if (budget.max_products < static_cast<std::int64_t>(s.size()))
        throw InvalidInput("max_products must be at least |set|");

    std::vector<Item> base;
    base.reserve(s.size());
    for (const auto& m : s.elements()) base.push_back(make_item(m));

    std::vector<Item> frontier = base;
    std::int64_t formed = static_cast<std::int64_t>(base.size());
    EnginePass out;

    for (int depth = 1;; ++depth) {
        out.depth_reached = depth;
        if (want_lower)
            out.lower = std::max(out.lower, depth_root(depth_max_r_lower(frontier), depth));
        if (want_upper)
            out.upper = std::min(out.upper, depth_root(depth_max_norm_upper(frontier), depth));
        if (depth == budget.max_depth) break;

        const std::int64_t next_count =
            static_cast<std::int64_t>(frontier.size()) * static_cast<std::int64_t>(base.size());
        std::int64_t take = next_count;
        bool truncated = false;
        if (formed + next_count > budget.max_products) {
            take = budget.max_products - formed;
            truncated = true;
        }
        if (take <= 0) {
            out.partial = true;
            break;
        }

        std::vector<Item> next(static_cast<std::size_t>(take));
#ifdef _OPENMP
#pragma omp parallel for num_threads(thread_count()) schedule(static) if (take > 64)
#endif
        for (std::int64_t k = 0; k < take; ++k) {
            const auto pi = static_cast<std::size_t>(k / static_cast<std::int64_t>(base.size()));
            const auto bi = static_cast<std::size_t>(k % static_cast<std::int64_t>(base.size()));
            next[static_cast<std::size_t>(k)] = make_item(multiply(frontier[pi].m, base[bi].m));
        }
        formed += take;

        if (truncated) {
            // A partial depth still yields valid lower bounds; the norm-based
            // upper bound needs the whole depth, so it is skipped.
            out.depth_reached = depth + 1;
            out.partial = true;
            if (want_lower)
                out.lower =
                    std::max(out.lower, depth_root(depth_max_r_lower(next), depth + 1));
            break;
        }

        dedup_exact(next);
        if (budget.prune) prune_dominated(next);
        frontier = std::move(next);
    }

    // Gelfand on powers collapses the bracket for a singleton: products of
    // one matrix are its powers, so j({A}) = r(A) and the certified Perron
    // enclosure is a norm-of-products bound at power-of-two depths.
    if (tighten_singleton && s.size() == 1) {
        const PerronBracket pb = spectral_radius_bracket(s[0], kEvalTol);
        if (want_lower) out.lower = std::max(out.lower, pb.lower);
        if (want_upper) out.upper = std::min(out.upper, pb.upper);
    }
    return out;
}

} // namespace

Interval interval_mul(const Interval& a, const Interval& b) {
    return {a.lower * b.lower, a.upper * b.upper, a.exact && b.exact, a.partial || b.partial};
}

Interval interval_pow(const Interval& a, double e) {
    if (e < 0.0) throw InvalidInput("interval_pow: exponent must be nonnegative");
    return {entry_pow(a.lower, e), entry_pow(a.upper, e), a.exact, a.partial};
}

Interval interval_sqrt(const Interval& a) {
    return {std::sqrt(a.lower), std::sqrt(a.upper), a.exact, a.partial};
}

Interval interval_point(double v) { return {v, v, true, false}; }

BoundResult gsr_lower_bound(const MatrixSet& s, const EnumerationBudget& budget) {
    const EnginePass p = enumerate(s, budget, true, false, false);
    return {p.lower, p.depth_reached, p.partial};
}

BoundResult jsr_upper_bound(const MatrixSet& s, const EnumerationBudget& budget) {
    const EnginePass p = enumerate(s, budget, false, true, false);
    return {p.upper, p.depth_reached, p.partial};
}

RadiusBracket radius_bracket(const MatrixSet& s, SetRadiusKind kind,
                             const EnumerationBudget& budget) {
    const EnginePass p = enumerate(s, budget, true, true, true);
    RadiusBracket b;
    b.lower = std::min(p.lower, p.upper); // guard against crossing by eval slack
    b.upper = p.upper;
    b.depth_used = p.depth_reached;
    b.functional = kind;
    b.partial = p.partial;
    return b;
}

RadiusBracket radius_bracket_reference(const MatrixSet& s, SetRadiusKind kind, int max_depth) {
    if (max_depth < 1) throw InvalidInput("enumeration depth must be >= 1");
    std::vector<NonnegMatrix> frontier(s.elements().begin(), s.elements().end());
    RadiusBracket b;
    b.functional = kind;
    b.upper = std::numeric_limits<double>::infinity();
    for (int depth = 1;; ++depth) {
        double max_r = 0.0, max_n = 0.0;
        for (const auto& m : frontier) {
            max_r = std::max(max_r, spectral_radius_bracket(m, kEvalTol).lower);
            max_n = std::max(max_n, operator_norm_bracket(m, kEvalTol).upper);
        }
        b.lower = std::max(b.lower, depth_root(max_r, depth));
        b.upper = std::min(b.upper, depth_root(max_n, depth));
        b.depth_used = depth;
        if (depth == max_depth) break;
        std::vector<NonnegMatrix> next;
        next.reserve(frontier.size() * s.size());
        for (const auto& p : frontier)
            for (const auto& a : s.elements()) next.push_back(multiply_serial(p, a));
        frontier = std::move(next);
    }
    if (s.size() == 1) {
        const PerronBracket pb = spectral_radius_bracket(s[0], kEvalTol);
        b.lower = std::max(b.lower, pb.lower);
        b.upper = std::min(b.upper, pb.upper);
    }
    b.lower = std::min(b.lower, b.upper);
    return b;
}

ComparisonOutcome compare_rho(const RadiusBracket& lhs, const RadiusBracket& rhs, double tol) {
    if (lhs.functional != rhs.functional)
        throw InvalidInput("compare_rho: brackets computed for different functionals");
    if (lhs.lower > rhs.upper * (1.0 + tol) + tol) return ComparisonOutcome::Violation;
    return ComparisonOutcome::Consistent;
}

} // namespace hjsr
