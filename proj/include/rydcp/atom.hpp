#pragma once

namespace rydcp {

/// Hydrogenic two-level Rydberg transition n -> n'.
///
/// `dipole_sq` is the sigma-weighted squared-dipole magnitude
/// S = |sigma_ij (d_i d_j)^{eg}|, taken as e^2 a0^2 n^4 with unit prefactor
/// (order-of-magnitude calibration; angular structure is not modelled).
struct RydbergTransition {
    int n_initial;
    int n_final;
    double omega0;     // rad/s
    double dipole_sq;  // statC^2 cm^2
};

/// omega0 = (Ry / hbar) (1/n^2 - 1/n'^2). No quantum defects.
[[nodiscard]] double transition_frequency(int n, int n_prime);

/// S(n) = e^2 a0^2 n^4.
[[nodiscard]] double dipole_sq_scale(int n);

[[nodiscard]] RydbergTransition make_transition(int n, int n_prime);

} // namespace rydcp
