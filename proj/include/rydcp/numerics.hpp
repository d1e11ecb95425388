#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <sstream>
#include <type_traits>
#include <vector>

#include "rydcp/errors.hpp"

namespace rydcp {

template <typename Scalar>
[[nodiscard]] Scalar sinc(Scalar x) noexcept {
    const Scalar ax = std::abs(x);
    if (ax < Scalar(1e-4)) {
        const Scalar x2 = x * x;
        return Scalar(1) - x2 / Scalar(6) + x2 * x2 / Scalar(120);
    }
    return std::sin(x) / x;
}

/// (e^{ixt} - 1) / x evaluated as i t e^{ixt/2} sinc(xt/2); finite at x = 0.
template <typename Scalar>
[[nodiscard]] std::complex<Scalar> oscillatory_kernel(Scalar x, Scalar t) noexcept {
    const Scalar half = x * t / Scalar(2);
    return std::complex<Scalar>(0, t) * std::polar(sinc(half), half);
}

/// Integral of e^{ixs} over s in [0, t].
template <typename Scalar>
[[nodiscard]] std::complex<Scalar> phase_integral(Scalar x, Scalar t) noexcept {
    const Scalar half = x * t / Scalar(2);
    return t * std::polar(sinc(half), half);
}

template <typename T>
[[nodiscard]] double magnitude(const T& v) noexcept {
    return static_cast<double>(std::abs(v));
}

/// Pairwise (cascade) summation; result depends only on the input order.
template <typename T>
[[nodiscard]] T pairwise_sum(std::span<const T> values) {
    constexpr std::size_t block = 16;
    if (values.size() <= block) {
        T acc{};
        for (const auto& v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-300;
    /// Initial panels never exceed this length (Nyquist discipline for
    /// oscillatory integrands). Infinity disables the pre-split.
    double max_panel = std::numeric_limits<double>::infinity();
    std::size_t max_intervals = 20'000'000;
};

template <typename Value>
struct QuadratureResult {
    Value value{};
    double error = 0.0;
    std::size_t intervals = 0;
    /// Set when the requested tolerance sits below the floating-point floor
    /// of the integrand and the roundoff bound was accepted instead.
    bool roundoff_limited = false;
};

namespace detail {

inline constexpr std::array<double, 8> gk15_nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> gauss_weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename Value>
struct Panel {
    double lo;
    double hi;
    Value value;
    double error;
    double abs_integral;
};

// One 15-point Kronrod panel with the QUADPACK error heuristic.
template <typename Value, typename F>
Panel<Value> gk15(F& f, double lo, double hi) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();

    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    const Value fc = f(centre);
    Value res_gauss = fc * gauss_weights[3];
    Value res_kronrod = fc * kronrod_weights[7];
    double res_abs = std::abs(kronrod_weights[7] * magnitude(fc));

    std::array<Value, 7> f1{};
    std::array<Value, 7> f2{};
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * gk15_nodes[j];
        f1[j] = f(centre - dx);
        f2[j] = f(centre + dx);
        const Value sum = f1[j] + f2[j];
        res_kronrod += kronrod_weights[j] * sum;
        res_abs += kronrod_weights[j] * (magnitude(f1[j]) + magnitude(f2[j]));
        if (j % 2 == 1) res_gauss += gauss_weights[j / 2] * sum;
    }

    const Value mean = res_kronrod * 0.5;
    double res_asc = kronrod_weights[7] * magnitude(fc - mean);
    for (std::size_t j = 0; j < 7; ++j)
        res_asc += kronrod_weights[j] * (magnitude(f1[j] - mean) + magnitude(f2[j] - mean));

    const double scale = std::abs(half);
    res_abs *= scale;
    res_asc *= scale;
    double err = magnitude((res_kronrod - res_gauss) * half);
    if (res_asc != 0.0 && err != 0.0)
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    if (res_abs > tiny / (50.0 * eps)) err = std::max(50.0 * eps * res_abs, err);

    return Panel<Value>{lo, hi, res_kronrod * half, err, res_abs};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature over [breakpoints.front(),
/// breakpoints.back()]. The integrand may jump or kink at interior
/// breakpoints. Throws Error(quadrature_nonconvergence) when the interval
/// budget runs out.
template <typename F>
auto integrate(F&& f, std::span<const double> breakpoints, const QuadratureOptions& opts = {})
    -> QuadratureResult<std::decay_t<std::invoke_result_t<F&, double>>> {
    using Value = std::decay_t<std::invoke_result_t<F&, double>>;
    using Panel = detail::Panel<Value>;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    QuadratureResult<Value> out;
    if (breakpoints.size() < 2) return out;

    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double lo = breakpoints[i];
        const double hi = breakpoints[i + 1];
        if (!(hi > lo)) continue;
        std::size_t pieces = 1;
        if (std::isfinite(opts.max_panel) && opts.max_panel > 0.0)
            pieces = static_cast<std::size_t>(std::ceil((hi - lo) / opts.max_panel));
        pieces = std::max<std::size_t>(pieces, 1);
        if (panels.size() + pieces > opts.max_intervals) {
            throw Error(ErrorCode::quadrature_nonconvergence,
                        "quadrature: Nyquist pre-split needs more than the interval budget");
        }
        const double step = (hi - lo) / static_cast<double>(pieces);
        for (std::size_t k = 0; k < pieces; ++k) {
            const double a = lo + step * static_cast<double>(k);
            const double b = (k + 1 == pieces) ? hi : lo + step * static_cast<double>(k + 1);
            panels.push_back(detail::gk15<Value>(f, a, b));
        }
    }
    if (panels.empty()) return out;

    Value total{};
    double total_err = 0.0;
    double total_abs = 0.0;
    for (const auto& p : panels) {
        total += p.value;
        total_err += p.error;
        total_abs += p.abs_integral;
    }

    auto by_error = [&panels](std::size_t a, std::size_t b) {
        return panels[a].error < panels[b].error;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_error)> queue(by_error);
    for (std::size_t i = 0; i < panels.size(); ++i) queue.push(i);

    auto converged = [&] {
        return total_err <= std::max(opts.abs_tol, opts.rel_tol * magnitude(total));
    };
    auto at_roundoff_floor = [&] { return total_err <= 100.0 * eps * total_abs; };

    while (!converged()) {
        if (at_roundoff_floor()) {
            out.roundoff_limited = true;
            break;
        }
        const std::size_t worst = queue.top();
        queue.pop();
        const Panel parent = panels[worst];
        const double mid = 0.5 * (parent.lo + parent.hi);
        if (!(mid > parent.lo && mid < parent.hi) || panels.size() >= opts.max_intervals) {
            std::ostringstream msg;
            msg << "quadrature did not converge: estimated error " << total_err
                << " against target " << std::max(opts.abs_tol, opts.rel_tol * magnitude(total))
                << " after " << panels.size() << " intervals (worst interval ["
                << parent.lo << ", " << parent.hi << "])";
            throw Error(ErrorCode::quadrature_nonconvergence, msg.str());
        }
        Panel left = detail::gk15<Value>(f, parent.lo, mid);
        Panel right = detail::gk15<Value>(f, mid, parent.hi);
        total += left.value + right.value - parent.value;
        total_err += left.error + right.error - parent.error;
        total_abs += left.abs_integral + right.abs_integral - parent.abs_integral;
        panels[worst] = left;
        panels.push_back(right);
        queue.push(worst);
        queue.push(panels.size() - 1);
    }

    // Final value in positional order so the result is independent of the
    // refinement history.
    std::sort(panels.begin(), panels.end(),
              [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
    std::vector<Value> values;
    values.reserve(panels.size());
    double err = 0.0;
    for (const auto& p : panels) {
        values.push_back(p.value);
        err += p.error;
    }
    out.value = pairwise_sum(std::span<const Value>(values));
    out.error = err;
    out.intervals = panels.size();
    return out;
}

template <typename F>
auto integrate(F&& f, double lo, double hi, const QuadratureOptions& opts = {}) {
    const std::array<double, 2> ends{lo, hi};
    return integrate(std::forward<F>(f), std::span<const double>(ends), opts);
}

} // namespace rydcp
