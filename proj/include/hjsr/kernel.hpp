#pragma once

#include <span>
#include <string>
#include <vector>

#include "hjsr/harness.hpp"
#include "hjsr/matrix.hpp"

namespace hjsr {

// Fixed catalog of nonnegative kernels on [0,1]^2.
//   constant:  k(x,y) = a
//   exp-diff:  k(x,y) = exp(a (x - y))
//   rank-one:  k(x,y) = u(x) v(y), (u,v) from a small catalog with u v == 1
//              pointwise, so every discretization has unit spectral radius
//   poly:      k(x,y) = a + b x y
enum class KernelId { Constant, ExpDiff, RankOne, PolyXY };

struct KernelSpec {
    KernelId id = KernelId::Constant;
    double a = 1.0;
    double b = 0.0;
    int catalog_index = 0;

    double eval(double x, double y) const;
    std::string name() const;

    static KernelSpec make(const std::string& id, std::span<const double> params);
    static int rank_one_catalog_size();
};

// Midpoint-rule discretization: nodes x_i = (i - 1/2)/N, matrix entries
// (1/N) k(x_i, x_j).  The uniform weight factors out of every unit-sum
// Hadamard construction, so discretization commutes with means and with
// the weighted symmetrizations.
struct Discretization {
    std::size_t grid_n = 0;
    double weight = 0.0;
    std::vector<double> nodes;
    NonnegMatrix matrix;
};

Discretization discretize(const KernelSpec& k, std::size_t n);

// One theorem checked at several grid sizes; verdicts must not depend on N
// and margins are reported with their maximum pairwise drift.
struct RefinementEntry {
    std::size_t grid_n = 0;
    std::string verdict;
    double min_margin = 0.0;
};

struct RefinementReport {
    std::string kernel;
    TheoremId theorem{};
    std::vector<RefinementEntry> entries;
    double max_drift = 0.0;
    bool verdicts_invariant = true;
};

RefinementReport refinement_study(const KernelSpec& k, TheoremId t,
                                  std::span<const std::size_t> grids, RhoSelector rho,
                                  const TrialConfig& cfg);

std::string refinement_to_json(const RefinementReport& report);

} // namespace hjsr
