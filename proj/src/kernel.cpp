#include "hjsr/kernel.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace hjsr {

namespace {

struct RankOnePair {
    const char* label;
    double (*u)(double);
    double (*v)(double);
};

// Pairs with u(x) v(x) == 1 pointwise, so the midpoint rule reproduces the
// unit spectral radius exactly at every grid size.
const RankOnePair kRankOneCatalog[] = {
    {"exp", [](double x) { return std::exp(x); }, [](double y) { return std::exp(-y); }},
    {"affine", [](double x) { return 1.0 + x; }, [](double y) { return 1.0 / (1.0 + y); }},
};

} // namespace

int KernelSpec::rank_one_catalog_size() {
    return static_cast<int>(std::size(kRankOneCatalog));
}

double KernelSpec::eval(double x, double y) const {
    switch (id) {
        case KernelId::Constant: return a;
        case KernelId::ExpDiff: return std::exp(a * (x - y));
        case KernelId::RankOne: {
            const auto& p = kRankOneCatalog[catalog_index];
            return p.u(x) * p.v(y);
        }
        case KernelId::PolyXY: return a + b * x * y;
    }
    throw InvalidInput("unknown kernel id");
}

std::string KernelSpec::name() const {
    switch (id) {
        case KernelId::Constant: return "constant(" + std::to_string(a) + ")";
        case KernelId::ExpDiff: return "exp-diff(" + std::to_string(a) + ")";
        case KernelId::RankOne:
            return std::string("rank-one(") + kRankOneCatalog[catalog_index].label + ")";
        case KernelId::PolyXY:
            return "poly(" + std::to_string(a) + "," + std::to_string(b) + ")";
    }
    return "?";
}

KernelSpec KernelSpec::make(const std::string& id, std::span<const double> params) {
    KernelSpec spec;
    auto take = [&](std::size_t i, double fallback) {
        return params.size() > i ? params[i] : fallback;
    };
    for (double p : params)
        if (!std::isfinite(p)) throw InvalidInput("kernel parameters must be finite");
    if (id == "constant") {
        spec.id = KernelId::Constant;
        spec.a = take(0, 1.0);
        if (spec.a < 0.0) throw InvalidInput("constant kernel must be nonnegative");
    } else if (id == "exp-diff") {
        spec.id = KernelId::ExpDiff;
        spec.a = take(0, 1.0);
    } else if (id == "rank-one") {
        spec.id = KernelId::RankOne;
        spec.catalog_index = static_cast<int>(take(0, 0.0));
        if (spec.catalog_index < 0 || spec.catalog_index >= rank_one_catalog_size())
            throw InvalidInput("rank-one kernel catalog index out of range");
    } else if (id == "poly") {
        spec.id = KernelId::PolyXY;
        spec.a = take(0, 1.0);
        spec.b = take(1, 1.0);
        if (spec.a < 0.0 || spec.b < 0.0)
            throw InvalidInput("poly kernel needs nonnegative coefficients");
    } else {
        throw InvalidInput("unknown kernel id: " + id);
    }
    return spec;
}

Discretization discretize(const KernelSpec& k, std::size_t n) {
    if (n < 2) throw InvalidInput("discretize: grid size must be >= 2");
    Discretization d;
    d.grid_n = n;
    d.weight = 1.0 / static_cast<double>(n);
    d.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        d.nodes[i] = (static_cast<double>(i) + 0.5) * d.weight;
    std::vector<double> entries(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double v = k.eval(d.nodes[i], d.nodes[j]);
            if (!(v >= 0.0) || !std::isfinite(v))
                throw InvalidInput("kernel evaluates negative or non-finite on the grid");
            entries[i * n + j] = d.weight * v;
        }
    d.matrix = NonnegMatrix(n, std::move(entries));
    return d;
}

namespace {

// Factor lists for the kernel-side theorem instances: the discretized kernel
// alternating with its adjoint.
std::vector<MatrixSet> kernel_factors(const NonnegMatrix& m, int count) {
    std::vector<MatrixSet> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(MatrixSet::singleton(i % 2 == 0 ? m : adjoint(m)));
    return out;
}

struct StudyPoint {
    std::string verdict;
    double min_margin;
};

StudyPoint study_at(const KernelSpec& k, TheoremId t, std::size_t n, RhoSelector rho,
                    const TrialConfig& cfg) {
    const Discretization d = discretize(k, n);
    switch (t) {
        case TheoremId::RhoN:
        case TheoremId::RhoTildeN: {
            const auto factors = kernel_factors(d.matrix, cfg.n_factors);
            const AlphaCurve curve = t == TheoremId::RhoN
                                         ? scan_rho_n(factors, rho, cfg)
                                         : scan_rho_tilde_n(factors, rho, cfg);
            return {curve.monotone_ok ? "MONOTONE_OK" : "VIOLATION", curve.min_margin};
        }
        case TheoremId::RhoBarN: {
            std::vector<std::vector<MatrixSet>> grid;
            for (int i = 0; i < cfg.n_factors; ++i)
                grid.push_back(kernel_factors(i % 2 == 0 ? d.matrix : adjoint(d.matrix),
                                              cfg.m_cols));
            const AlphaCurve curve = scan_rho_bar_n(grid, rho, cfg);
            return {curve.monotone_ok && curve.cute_consistent ? "MONOTONE_OK" : "VIOLATION",
                    curve.min_margin};
        }
        case TheoremId::EjsMean: {
            Instance inst;
            inst.sets.push_back(MatrixSet::singleton(d.matrix));
            inst.sets.push_back(MatrixSet::singleton(adjoint(d.matrix)));
            inst.weights = WeightVector({0.5, 0.5}, WeightRegime::UnitSum);
            const TrialResult res = check_weighted_mean(TheoremId::EjsMean, inst, cfg);
            double margin = std::numeric_limits<double>::infinity();
            for (const auto& l : res.links) margin = std::min(margin, l.margin);
            return {res.status == TrialStatus::Pass ? "PASS" : "VIOLATION", margin};
        }
        default:
            throw InvalidInput("refinement_study: theorem not in scope for exact functionals");
    }
}

} // namespace

RefinementReport refinement_study(const KernelSpec& k, TheoremId t,
                                  std::span<const std::size_t> grids, RhoSelector rho,
                                  const TrialConfig& cfg) {
    if (grids.empty()) throw InvalidInput("refinement_study: no grid sizes");
    RefinementReport report;
    report.kernel = k.name();
    report.theorem = t;
    for (std::size_t n : grids) {
        const StudyPoint p = study_at(k, t, n, rho, cfg);
        report.entries.push_back({n, p.verdict, p.min_margin});
    }
    for (std::size_t i = 0; i < report.entries.size(); ++i)
        for (std::size_t j = i + 1; j < report.entries.size(); ++j) {
            report.max_drift =
                std::max(report.max_drift, std::abs(report.entries[i].min_margin -
                                                    report.entries[j].min_margin));
            if (report.entries[i].verdict != report.entries[j].verdict)
                report.verdicts_invariant = false;
        }
    return report;
}

std::string refinement_to_json(const RefinementReport& report) {
    nlohmann::json doc;
    doc["kernel"] = report.kernel;
    doc["theorem"] = theorem_name(report.theorem);
    auto entries = nlohmann::json::array();
    for (const auto& e : report.entries)
        entries.push_back(
            {{"grid", e.grid_n}, {"verdict", e.verdict}, {"min_margin", e.min_margin}});
    doc["entries"] = std::move(entries);
    doc["max_drift"] = report.max_drift;
    doc["verdicts_invariant"] = report.verdicts_invariant;
    return doc.dump(2) + "\n";
}

} // namespace hjsr
