#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hjsr {

inline std::uint64_t split_mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Per-trial seed derived from (master seed, trial index); parallel and serial
// trial execution therefore draw identical streams.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
    return split_mix64(master ^ split_mix64(index + 1));
}

// Deterministic sampling on top of the standardized mt19937_64 stream.  The
// std:: distributions are implementation-defined, so the few draws needed
// here are spelled out.
class SampleStream {
public:
    explicit SampleStream(std::uint64_t seed) : eng_(seed) {}

    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; } // [0,1)
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }
    double exponential() { return -std::log1p(-uniform01()); } // Exp(1)

private:
    std::mt19937_64 eng_;
};

} // namespace hjsr
