#include "rydcp/excitation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "rydcp/coupling.hpp"
#include "rydcp/errors.hpp"
#include "rydcp/quantities.hpp"

namespace rydcp {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr std::complex<double> imag_unit{0.0, 1.0};

void require_time(double t, const char* where) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw Error(ErrorCode::invalid_argument, std::string(where) + ": time must be >= 0");
}

QuadratureOptions with_nyquist_panels(QuadratureOptions quad, double omega0, const MotionShape& shape) {
    const double fastest = std::max(omega0, characteristic_frequency(shape));
    // 15 Kronrod nodes per panel, at least 32 nodes per period
    if (fastest > 0.0) quad.max_panel = std::min(quad.max_panel, two_pi / fastest * 15.0 / 32.0);
    return quad;
}

} // namespace

const char* to_string(Method method) noexcept {
    switch (method) {
    case Method::time_domain: return "time_domain";
    case Method::resonant_rwa: return "resonant";
    case Method::scaling_law: return "scaling";
    case Method::spectral: return "spectral";
    }
    return "unknown";
}

std::complex<double> drive_overlap(double omega0, const MirrorMotion& m, double t,
                                   const QuadratureOptions& quad) {
    require_time(t, "drive_overlap");
    if (t == 0.0) return {0.0, 0.0};

    if (const auto* h = std::get_if<Harmonic>(&m.shape())) {
        const auto co = std::polar(1.0, -h->phase) * phase_integral(omega0 - h->omega, t);
        const auto counter = std::polar(1.0, h->phase) * phase_integral(omega0 + h->omega, t);
        return (counter - co) / (2.0 * imag_unit);
    }

    const auto points = shape_breakpoints(m.shape(), 0.0, t);
    auto integrand = [&](double s) { return std::polar(evaluate_shape(m, s), omega0 * s); };
    return integrate(integrand, std::span<const double>(points),
                     with_nyquist_panels(quad, omega0, m.shape()))
        .value;
}

ExcitationResult amplitude_time_domain(const RydbergTransition& tr, const MirrorMotion& m,
                                       double t, const TimeDomainOptions& opts) {
    require_time(t, "amplitude_time_domain");
    const double hbar = constants().hbar;
    std::complex<double> amplitude;

    if (opts.coupling == CouplingModel::linearized) {
        const auto k = perturbation_coefficient(m.z0(), m.amplitude());
        amplitude = imag_unit / hbar * (k.value * tr.dipole_sq) *
                    drive_overlap(tr.omega0, m, t, opts.quadrature);
    } else {
        std::complex<double> overlap{0.0, 0.0};
        if (t > 0.0) {
            const double inv_z0_cube = 1.0 / (m.z0() * m.z0() * m.z0());
            auto integrand = [&](double s) {
                const double z = distance(m, s);
                return std::polar(1.0 / (z * z * z) - inv_z0_cube, tr.omega0 * s);
            };
            const auto points = shape_breakpoints(m.shape(), 0.0, t);
            overlap = integrate(integrand, std::span<const double>(points),
                                with_nyquist_panels(opts.quadrature, tr.omega0, m.shape()))
                          .value;
        }
        amplitude = imag_unit / hbar * (tr.dipole_sq / 16.0) * overlap;
    }
    return {amplitude, std::norm(amplitude), Method::time_domain};
}

ExcitationResult probability_resonant(const RydbergTransition& tr, const MirrorMotion& m,
                                      double t) {
    require_time(t, "probability_resonant");
    const auto* h = std::get_if<Harmonic>(&m.shape());
    if (h == nullptr) {
        throw Error(ErrorCode::detuned_input,
                    "probability_resonant needs harmonic motion; use amplitude_time_domain");
    }
    const double mismatch = std::abs(h->omega - tr.omega0) * t;
    if (!(mismatch < 0.1)) {
        std::ostringstream msg;
        msg << "probability_resonant: |omega - omega0| t = " << mismatch
            << " is not << 1; use amplitude_time_domain";
        throw Error(ErrorCode::detuned_input, msg.str());
    }
    static_cast<void>(perturbation_coefficient(m.z0(), m.amplitude()));
    const double hbar = constants().hbar;
    const double ratio = m.amplitude() / m.z0();
    const double z3 = m.z0() * m.z0() * m.z0();
    const double s_over = tr.dipole_sq / z3;
    const double p = 9.0 / (1024.0 * hbar * hbar) * ratio * ratio * s_over * s_over * t * t;
    return {std::nullopt, p, Method::resonant_rwa};
}

double scaling_constant() {
    const auto c = constants();
    const double ea0 = c.electron_charge * c.bohr_radius;
    const double ea0_sq = ea0 * ea0;
    return 9.0 * ea0_sq * ea0_sq / (1024.0 * c.hbar * c.hbar);
}

double probability_scaling(int n, double z0, double a, double t) {
    if (n < 1)
        throw Error(ErrorCode::invalid_quantum_number, "principal quantum number must be >= 1");
    if (!(z0 > 0.0)) throw Error(ErrorCode::nonpositive_distance, "probability_scaling: z0 <= 0");
    if (!(a >= 0.0)) throw Error(ErrorCode::invalid_argument, "probability_scaling: a < 0");
    if (!(a < z0))
        throw Error(ErrorCode::amplitude_exceeds_distance, "probability_scaling: a >= z0");
    require_time(t, "probability_scaling");
    const double n2 = static_cast<double>(n) * n;
    const double n4 = n2 * n2;
    const double z2 = z0 * z0;
    const double z4 = z2 * z2;
    return scaling_constant() * a * a * (n4 * n4) * t * t / (z4 * z4);
}

ExcitationResult amplitude_spectral(const RydbergTransition& tr, const MirrorMotion& m,
                                    const MotionSpectrum& spec, double t) {
    require_time(t, "amplitude_spectral");
    if (t > spec.window * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "amplitude_spectral: t = " << t << " s exceeds the spectrum window "
            << spec.window << " s";
        throw Error(ErrorCode::window_mismatch, msg.str());
    }
    const auto count = spec.omegas.size();
    if (count < 3 || spec.g.size() != count)
        throw Error(ErrorCode::invalid_argument, "amplitude_spectral: malformed spectrum");
    const double step = spec.spacing();
    if (!(step > 0.0) || step > two_pi / spec.window * (1.0 + 1e-9)) {
        throw Error(ErrorCode::grid_resolution,
                    "amplitude_spectral: frequency spacing exceeds 2 pi / window; the kernel "
                    "oscillation is unresolved");
    }
    if (spec.omegas[count - 1] <= tr.omega0 || spec.omegas[0] >= -tr.omega0) {
        throw Error(ErrorCode::grid_resolution,
                    "amplitude_spectral: frequency grid does not reach the transition frequency");
    }

    std::vector<std::complex<double>> terms(static_cast<std::size_t>(count));
    for (Eigen::Index k = 0; k < count; ++k) {
        const double detuning = spec.omegas[k] - tr.omega0;
        // (e^{-i x t} - 1) / x
        const auto kernel = -oscillatory_kernel(-detuning, t);
        terms[static_cast<std::size_t>(k)] = spec.g[k] * kernel;
    }
    const auto sum = step * pairwise_sum(std::span<const std::complex<double>>(terms));

    const auto k = perturbation_coefficient(m.z0(), m.amplitude());
    const double hbar = constants().hbar;
    const std::complex<double> amplitude =
        -(k.value * tr.dipole_sq) / (std::sqrt(two_pi) * hbar) * sum;
    return {amplitude, std::norm(amplitude), Method::spectral};
}

} // namespace rydcp
