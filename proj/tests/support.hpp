#pragma once

// Shared helpers for the test suites: relative error, seeded generators and
// simple reference integrators that do not share code with the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>

namespace rydcp::test {

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double rel_diff(std::complex<double> a, std::complex<double> b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Every property suite draws from this so failures are reproducible.
inline std::mt19937_64 generator(std::uint64_t salt = 0) {
    return std::mt19937_64(0x5eed'c0de'2024ULL ^ salt);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

/// Composite Simpson rule with `panels` (even) panels; reference only.
template <typename F>
auto simpson(F&& f, double lo, double hi, int panels) {
    if (panels % 2) ++panels;
    const double h = (hi - lo) / panels;
    auto sum = f(lo) + f(hi);
    for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
    return sum * (h / 3.0);
}

} // namespace rydcp::test
