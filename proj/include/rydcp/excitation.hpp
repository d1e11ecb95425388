#pragma once

#include <complex>
#include <optional>

#include "rydcp/atom.hpp"
#include "rydcp/mirror.hpp"
#include "rydcp/numerics.hpp"

// First-order transition amplitude for g -> e driven by the moving mirror:
//
//   c_e(t) = (i/hbar) K S  integral_0^t e^{i omega0 t'} f(t') dt',
//   K = 3 a / (16 z0^4),  S = |sigma_ij (d_i d_j)^{eg}|.
//
// Probabilities are returned unclamped; P_e > 1 only means the scenario has
// left the perturbative regime (see validity.hpp).

namespace rydcp {

enum class Method { time_domain, resonant_rwa, scaling_law, spectral };

[[nodiscard]] const char* to_string(Method method) noexcept;

struct ExcitationResult {
    std::optional<std::complex<double>> amplitude;
    double probability = 0.0;
    Method method = Method::time_domain;
};

enum class CouplingModel {
    linearized,  // 1/z^3 expanded to first order in a/z0
    exact,       // full 1/z(t)^3 - 1/z0^3
};

struct TimeDomainOptions {
    CouplingModel coupling = CouplingModel::linearized;
    QuadratureOptions quadrature{};
};

/// integral_0^t e^{i omega0 t'} f(t') dt'. Closed form for harmonic shapes
/// (co- and counter-rotating terms), adaptive quadrature otherwise.
[[nodiscard]] std::complex<double> drive_overlap(double omega0, const MirrorMotion& m, double t,
                                                 const QuadratureOptions& quad = {});

[[nodiscard]] ExcitationResult amplitude_time_domain(const RydbergTransition& tr,
                                                     const MirrorMotion& m, double t,
                                                     const TimeDomainOptions& opts = {});

/// Rotating-wave result P = 9/(2^10 hbar^2) (a/z0)^2 S^2 / z0^6 t^2. Requires a
/// harmonic shape with |omega - omega0| t < 0.1; throws detuned_input otherwise.
[[nodiscard]] ExcitationResult probability_resonant(const RydbergTransition& tr,
                                                    const MirrorMotion& m, double t);

/// C = 9 e^4 a0^4 / (1024 hbar^2) in cm^6 s^-2.
[[nodiscard]] double scaling_constant();

/// P = C a^2 n^8 t^2 / z0^8.
[[nodiscard]] double probability_scaling(int n, double z0, double a, double t);

/// Frequency-domain route. The omega integral is a rectangle sum on the
/// spectrum grid, which reproduces the time integral exactly (up to the
/// truncated tail) whenever the grid spacing is at most 2 pi / window.
[[nodiscard]] ExcitationResult amplitude_spectral(const RydbergTransition& tr,
                                                  const MirrorMotion& m,
                                                  const MotionSpectrum& spec, double t);

} // namespace rydcp
