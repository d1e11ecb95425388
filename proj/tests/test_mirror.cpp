#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "rydcp/errors.hpp"
#include "rydcp/mirror.hpp"
#include "support.hpp"

using namespace rydcp;
using rydcp::test::rel_diff;
using std::numbers::pi;

namespace {

constexpr double z0 = 2e-3;
constexpr double a = 2e-4;

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::invalid_argument;
}

/// Index of the grid point closest to omega.
Eigen::Index nearest(const MotionSpectrum& s, double omega) {
    Eigen::Index best = 0;
    (s.omegas - omega).abs().minCoeff(&best);
    return best;
}

} // namespace

TEST_SUITE("mirror") {

TEST_CASE("harmonic shape values") {
    const double w = 3.0;
    const MirrorMotion m(z0, a, Harmonic{w});
    CHECK(evaluate_shape(m, 0.0) == 0.0);
    CHECK(rel_diff(evaluate_shape(m, pi / (2.0 * w)), 1.0) < 1e-15);
    CHECK(distance(m, 0.0) == z0);
    CHECK(rel_diff(distance(m, pi / (2.0 * w)), 1.8e-3) < 1e-14);
    const MirrorMotion shifted(z0, a, Harmonic{w, pi / 2.0});
    CHECK(rel_diff(evaluate_shape(shifted, 0.0), 1.0) < 1e-15);
}

TEST_CASE("harmonic minimum distance is z0 - a") {
    const MirrorMotion m(z0, a, Harmonic{1.0, 0.3});
    double lowest = z0;
    for (int i = 0; i <= 100'000; ++i) lowest = std::min(lowest, distance(m, 2.0 * pi * i / 100'000));
    CHECK(rel_diff(lowest, z0 - a) < 1e-9);
}

TEST_CASE("square train is zero-mean with unit peak-to-peak") {
    for (double duty : {0.1, 0.25, 0.5, 0.8}) {
        const MirrorMotion m(z0, a, SquareTrain{2.0 * pi, duty});
        // midpoint samples land on exact fractions of the period
        const int samples = 10'000;
        double sum = 0.0, lo = 1.0, hi = -1.0;
        for (int i = 0; i < samples; ++i) {
            const double f = evaluate_shape(m, (i + 0.5) / samples);
            sum += f;
            lo = std::min(lo, f);
            hi = std::max(hi, f);
        }
        CHECK(std::abs(sum / samples) < 1e-12);
        CHECK(rel_diff(hi - lo, 1.0) < 1e-15);
        CHECK(std::abs(lo) <= 1.0);
        CHECK(std::abs(hi) <= 1.0);
    }
}

TEST_CASE("motion parameters are validated") {
    CHECK(code_of([] { MirrorMotion(z0, z0, Harmonic{1.0}); }) == ErrorCode::amplitude_exceeds_distance);
    CHECK(code_of([] { MirrorMotion(0.0, 0.0, Harmonic{1.0}); }) == ErrorCode::nonpositive_distance);
    CHECK(code_of([] { MirrorMotion(z0, -a, Harmonic{1.0}); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { MirrorMotion(z0, a, SquareTrain{1.0, 0.0}); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { MirrorMotion(z0, a, SquareTrain{1.0, 1.0}); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { MirrorMotion(z0, a, SquareTrain{0.0, 0.5}); }) == ErrorCode::invalid_argument);
    CHECK_NOTHROW(MirrorMotion(z0, 0.0, Harmonic{1.0}));
}

TEST_CASE("tabulated shapes interpolate linearly inside their span") {
    const TabulatedShape table({0.0, 1.0, 3.0}, {0.0, 1.0, -1.0});
    const MirrorMotion m(z0, a, table);
    CHECK(evaluate_shape(m, 0.5) == 0.5);
    CHECK(evaluate_shape(m, 2.0) == 0.0);
    CHECK(evaluate_shape(m, 3.0) == -1.0);
    CHECK(code_of([&] { static_cast<void>(evaluate_shape(m, 3.5)); }) == ErrorCode::out_of_span);
    CHECK(code_of([] { TabulatedShape({0.0, 1.0}, {0.0, 1.5}); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { TabulatedShape({0.0, 0.0}, {0.0, 0.5}); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { TabulatedShape({0.0}, {0.0}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("shape tables are read from two-column text") {
    std::istringstream good("# time_s f\n0 0\n\n1e-9, 0.5  # comment\n2e-9 -0.25\n");
    const auto table = read_tabulated_shape(good);
    CHECK(table.times().size() == 3);
    CHECK(table.values()[1] == 0.5);
    CHECK(table.back() == 2e-9);

    std::istringstream backwards("0 0\n2 0.1\n1 0.2\n");
    try {
        static_cast<void>(read_tabulated_shape(backwards));
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::parse_error);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::istringstream junk("0 0\n1 x\n");
    CHECK(code_of([&] { static_cast<void>(read_tabulated_shape(junk)); }) == ErrorCode::parse_error);
    CHECK(code_of([] { static_cast<void>(load_tabulated_shape("/nonexistent/shape.txt")); }) ==
          ErrorCode::io_error);
}

TEST_CASE("distance stays within [z0 - a, z0 + a]") {
    auto rng = test::generator(4);
    for (int i = 0; i < 200; ++i) {
        const double zz = test::log_uniform(rng, 1e-4, 1.0);
        const double aa = test::uniform(rng, 0.0, 0.99) * zz;
        const MotionShape shapes[] = {Harmonic{test::log_uniform(rng, 1.0, 1e12), test::uniform(rng, 0, 6)},
                                      SquareTrain{test::log_uniform(rng, 1.0, 1e12), test::uniform(rng, 0.05, 0.95)}};
        for (const auto& shape : shapes) {
            const MirrorMotion m(zz, aa, shape);
            for (int k = 0; k < 50; ++k) {
                const double d = distance(m, test::log_uniform(rng, 1e-15, 1e2));
                CHECK(d >= zz - aa - 1e-15 * zz);
                CHECK(d <= zz + aa + 1e-15 * zz);
                CHECK(d > 0.0);
            }
        }
    }
}

TEST_CASE("harmonic spectrum peaks at the drive frequency") {
    const double w = 5.0;
    const double window = 50.3 * 2.0 * pi / w;
    const MirrorMotion m(z0, a, Harmonic{w});
    const auto s = spectrum(m, window, 2048);
    const Eigen::ArrayXd mag = s.g.abs();
    Eigen::Index peak = 0;
    mag.maxCoeff(&peak);
    CHECK(std::abs(std::abs(s.omegas[peak]) - w) <= s.spacing());
    std::vector<double> sorted(mag.begin(), mag.end());
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    CHECK(mag[peak] / sorted[sorted.size() / 2] > 1e2);
}

TEST_CASE("grid spacing and symmetry") {
    const double window = 7.0;
    const MirrorMotion m(z0, a, Harmonic{3.0, 0.4});
    const auto s = spectrum(m, window, 256);
    CHECK(s.omegas.size() == 257);
    CHECK(rel_diff(s.spacing(), 2.0 * pi / window) < 1e-14);
    CHECK(s.omegas[128] == 0.0);
    CHECK(s.window == window);
    for (Eigen::Index k = 1; k <= 128; ++k) {
        CHECK(s.omegas[128 + k] == -s.omegas[128 - k]);
        CHECK(rel_diff(s.g[128 + k], std::conj(s.g[128 - k])) < 1e-9);
    }
}

TEST_CASE("a zero table has a zero spectrum") {
    const TabulatedShape zeros({0.0, 0.5, 1.0, 1.5, 2.0}, {0.0, 0.0, 0.0, 0.0, 0.0});
    const auto s = spectrum(MirrorMotion(z0, a, zeros), 2.0, 256);
    CHECK(s.g.abs().maxCoeff() == 0.0);
}

TEST_CASE("Parseval on whole-period windows") {
    // with spacing 2 pi / W the grid sum is the Fourier-series Parseval identity
    for (double periods : {50.0, 64.0, 101.0}) {
        const double w = 2.0;
        const double window = periods * 2.0 * pi / w;
        const MirrorMotion m(z0, a, Harmonic{w, 0.7});
        const auto s = spectrum(m, window, static_cast<int>(40 * periods));
        const double lhs = s.g.abs2().sum() * s.spacing();
        CHECK(rel_diff(lhs, window / 2.0) < 1e-6);
    }
}

TEST_CASE("Parseval converges for tables as the grid widens") {
    std::vector<double> ts, vs;
    for (int i = 0; i <= 400; ++i) {
        ts.push_back(i * 0.01);
        vs.push_back(0.6 * std::sin(7.3 * ts.back()) + 0.3 * std::cos(19.1 * ts.back() + 0.4));
    }
    const TabulatedShape table(ts, vs);
    double energy = 0.0;  // exact integral of the piecewise-linear interpolant
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const double h = ts[i + 1] - ts[i];
        energy += h / 3.0 * (vs[i] * vs[i] + vs[i] * vs[i + 1] + vs[i + 1] * vs[i + 1]);
    }
    const MirrorMotion m(z0, a, table);
    const double coarse = spectrum(m, 4.0, 4096).g.abs2().sum() * 2.0 * pi / 4.0;
    const double fine = spectrum(m, 4.0, 65536).g.abs2().sum() * 2.0 * pi / 4.0;
    // a non-periodic window leaves a 1/omega^2 tail, so the sum converges as 1 / n_samples
    CHECK(rel_diff(fine, energy) < 1e-5);
    CHECK(rel_diff(coarse, energy) / rel_diff(fine, energy) > 8.0);
    CHECK(rel_diff(fine, energy) < rel_diff(coarse, energy));
}

TEST_CASE("harmonic energy concentrates at the drive frequency") {
    for (double periods : {50.0, 64.0, 80.1, 120.9}) {
        const double w = 1.0;
        const double window = periods * 2.0 * pi / w;
        const auto s = spectrum(MirrorMotion(z0, a, Harmonic{w}), window, static_cast<int>(40 * periods));
        const double dw = 2.0 * pi / window;
        const Eigen::ArrayXd power = s.g.abs2();
        double near = 0.0;
        for (Eigen::Index k = 0; k < s.omegas.size(); ++k)
            if (std::abs(std::abs(s.omegas[k]) - w) <= dw * (1.0 + 1e-12)) near += power[k];
        CHECK(near / power.sum() > 0.95);
    }
}

TEST_CASE("square train harmonics follow sin(pi k d) / k") {
    const double rep = 3.0;
    const int periods = 20;
    const double window = periods * 2.0 * pi / rep;
    for (double duty : {0.5, 0.3, 0.2}) {
        const auto s = spectrum(MirrorMotion(z0, a, SquareTrain{rep, duty}), window, 64 * periods);
        for (int k = 1; k <= 3; ++k) {
            const double expect = std::abs(std::sin(pi * k * duty)) / (pi * k);
            const double coefficient = std::abs(s.g[nearest(s, k * rep)]) * std::sqrt(2.0 * pi) / window;
            if (expect < 1e-12) {
                CHECK(coefficient < 1e-12);
            } else {
                CHECK(rel_diff(coefficient, expect) < 0.02);
            }
        }
    }
}

TEST_CASE("square fundamental is 2/pi of a unit sinusoid") {
    const double w = 2.0;
    const double window = 30.0 * 2.0 * pi / w;
    const auto sq = spectrum(MirrorMotion(z0, a, SquareTrain{w, 0.5}), window, 64 * 30);
    const auto sn = spectrum(MirrorMotion(z0, a, Harmonic{w}), window, 64 * 30);
    const double ratio = std::abs(sq.g[nearest(sq, w)]) / std::abs(sn.g[nearest(sn, w)]);
    CHECK(rel_diff(ratio, 2.0 / pi) < 1e-10);
}

TEST_CASE("shape_transform matches brute-force quadrature") {
    const double window = 3.3;
    const TabulatedShape table({0.0, 0.7, 1.1, 2.0, 3.3}, {0.0, 0.9, -0.4, 0.2, 0.1});
    const MotionShape shapes[] = {Harmonic{4.0, 0.2}, SquareTrain{5.0, 0.35}, table};
    for (const auto& shape : shapes) {
        const MirrorMotion m(z0, a, shape);
        for (double omega : {-7.0, 0.0, 1e-9, 2.5, 40.0}) {
            const auto brute = test::simpson(
                [&](double t) { return evaluate_shape(m, t) * std::exp(std::complex<double>(0, omega * t)); },
                0.0, window, 400'000) / std::sqrt(2.0 * pi);
            CHECK(std::abs(shape_transform(shape, window, omega) - brute) < 1e-4);
        }
    }
}

TEST_CASE("undersampled spectra are rejected") {
    const MirrorMotion m(z0, a, Harmonic{100.0});
    CHECK(code_of([&] { static_cast<void>(spectrum(m, 10.0, 64)); }) == ErrorCode::undersampling);
    CHECK(code_of([&] { static_cast<void>(spectrum(m, 0.0, 64)); }) == ErrorCode::invalid_argument);
    CHECK_NOTHROW(static_cast<void>(spectrum(m, 10.0, 5100)));
}

}
