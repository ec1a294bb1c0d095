// Wall-clock comparison of the OpenMP-parallel paths against their serial
// reference implementations: dense products, bracket enumeration, and a
// verification batch.  Set HJSR_THREADS to pin the parallel side.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "hjsr/harness.hpp"
#include "hjsr/jsr.hpp"
#include "hjsr/parallel.hpp"

using namespace hjsr;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

NonnegMatrix random_dense(SampleStream& rng, std::size_t n) {
    std::vector<double> e(n * n);
    for (auto& x : e) x = rng.uniform01();
    return NonnegMatrix(n, std::move(e));
}

void bench_matmul(std::size_t n, int reps) {
    SampleStream rng(11);
    const NonnegMatrix a = random_dense(rng, n);
    const NonnegMatrix b = random_dense(rng, n);
    auto t0 = Clock::now();
    double sink = 0.0;
    for (int k = 0; k < reps; ++k) sink += multiply_serial(a, b)(0, 0);
    const double serial = ms_since(t0);
    t0 = Clock::now();
    for (int k = 0; k < reps; ++k) sink += multiply(a, b)(0, 0);
    const double parallel = ms_since(t0);
    std::printf("matmul n=%-4zu reps=%-3d serial %8.2f ms  parallel %8.2f ms  speedup %.2fx"
                "  (sink %.3g)\n",
                n, reps, serial, parallel, serial / parallel, sink);
}

void bench_bracket(std::size_t dim, std::size_t set_size, int depth) {
    SampleStream rng(23);
    const MatrixSet set = random_set(rng, dim, set_size, 1.0);
    auto t0 = Clock::now();
    const RadiusBracket ref =
        radius_bracket_reference(set, SetRadiusKind::Generalized, depth);
    const double serial = ms_since(t0);
    t0 = Clock::now();
    const RadiusBracket par =
        radius_bracket(set, SetRadiusKind::Generalized, {depth, 2'000'000, true});
    const double parallel = ms_since(t0);
    std::printf("bracket dim=%zu |S|=%zu depth=%d  reference %8.2f ms  engine %8.2f ms  "
                "speedup %.1fx  [%.9g,%.9g] vs [%.9g,%.9g]\n",
                dim, set_size, depth, serial, parallel, serial / parallel, ref.lower,
                ref.upper, par.lower, par.upper);
}

void bench_harness(int trials) {
    TrialConfig cfg;
    cfg.dim = 4;
    cfg.m_cols = 3;
    cfg.trials = trials;
    cfg.seed = 7;
    auto t0 = Clock::now();
    const VerificationReport report = run_verification(TheoremId::EjsMean, cfg);
    std::printf("verify ejs-mean trials=%d  %8.2f ms  (threads=%d, %d pass)\n", trials,
                ms_since(t0), thread_count(), report.passed);
}

} // namespace

int main() {
    std::printf("threads: %d (cap with HJSR_THREADS)\n", thread_count());
    bench_matmul(128, 20);
    bench_matmul(256, 8);
    bench_bracket(3, 2, 6);
    bench_bracket(4, 3, 5);
    bench_harness(400);
    return 0;
}
