#pragma once

#include <Eigen/Core>

#include <string>

#include "rydcp/errors.hpp"

// Near-zone (nonretarded) atom-mirror coupling for a perfect conductor,
// expressed through the image dipole. All lengths in cm, dipoles in statC cm.

namespace rydcp {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

/// sigma = diag(1, 1, 2).
template <typename Scalar = double>
[[nodiscard]] Eigen::DiagonalMatrix<Scalar, 3> sigma_matrix() {
    return Eigen::DiagonalMatrix<Scalar, 3>(Scalar(1), Scalar(1), Scalar(2));
}

/// Diagonal second moments <d_x^2>, <d_y^2>, <d_z^2>; off-diagonals are zero.
template <typename Scalar = double>
struct DipoleExpectation {
    Vector3<Scalar> diagonal;

    [[nodiscard]] static DipoleExpectation isotropic(Scalar total) {
        return {Vector3<Scalar>::Constant(total / Scalar(3))};
    }
    [[nodiscard]] Matrix3<Scalar> matrix() const { return diagonal.asDiagonal(); }
};

namespace detail {
template <typename Scalar>
void require_positive_distance(Scalar z, const char* what) {
    if (!(z > Scalar(0)))
        throw Error(ErrorCode::nonpositive_distance,
                    std::string(what) + ": atom-mirror distance must be positive");
}
} // namespace detail

/// V(z) = -sigma_ij <d_i d_j> / (16 z^3), in erg.
template <typename Scalar>
[[nodiscard]] Scalar static_cp_potential(const DipoleExpectation<Scalar>& d, Scalar z) {
    detail::require_positive_distance(z, "static_cp_potential");
    const Scalar weighted = (sigma_matrix<Scalar>() * d.diagonal).sum();
    return -weighted / (Scalar(16) * z * z * z);
}

/// Field of the image dipole at the atom: E_i = sigma_ij d_j / (8 z^3).
template <typename Derived>
[[nodiscard]] Vector3<typename Derived::Scalar> image_field(const Eigen::MatrixBase<Derived>& dipole,
                                                            typename Derived::Scalar z) {
    using Scalar = typename Derived::Scalar;
    EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3)
    detail::require_positive_distance(z, "image_field");
    return sigma_matrix<Scalar>() * dipole / (Scalar(8) * z * z * z);
}

/// Matrix sigma_ij / (16 z^3) such that H_I = -d_i M_ij d_j.
template <typename Scalar>
[[nodiscard]] Matrix3<Scalar> interaction_coefficient(Scalar z) {
    detail::require_positive_distance(z, "interaction_coefficient");
    Matrix3<Scalar> m = Matrix3<Scalar>::Zero();
    m.diagonal() = sigma_matrix<Scalar>().diagonal() / (Scalar(16) * z * z * z);
    return m;
}

/// <H_I> = -tr(M <d d>) for the effective Hamiltonian above.
template <typename Scalar>
[[nodiscard]] Scalar interaction_energy(const DipoleExpectation<Scalar>& d, Scalar z) {
    return -(interaction_coefficient(z) * d.matrix()).trace();
}

template <typename Scalar>
struct PerturbationCoefficient {
    /// K = 3 a / (16 z0^4); V_I(t) = -K sigma_ij d_i d_j f(t).
    Scalar value;
    /// 3 a / z0, the relative size of the first neglected term of 1/z(t)^3.
    Scalar linearization_scale;
};

/// Throws amplitude_exceeds_distance for a >= z0. The sign of K is a
/// convention; only |c_e|^2 downstream depends on it.
template <typename Scalar>
[[nodiscard]] PerturbationCoefficient<Scalar> perturbation_coefficient(Scalar z0, Scalar a) {
    detail::require_positive_distance(z0, "perturbation_coefficient");
    if (a < Scalar(0))
        throw Error(ErrorCode::invalid_argument, "perturbation_coefficient: negative amplitude");
    if (!(a < z0))
        throw Error(ErrorCode::amplitude_exceeds_distance,
                    "perturbation_coefficient: amplitude must be smaller than z0");
    const Scalar z2 = z0 * z0;
    return {Scalar(3) * a / (Scalar(16) * z2 * z2), Scalar(3) * a / z0};
}

/// 1/z^3 to first order in the displacement, 1/z0^3 (1 + 3 (a/z0) f).
template <typename Scalar>
[[nodiscard]] Scalar linearized_inverse_cube(Scalar z0, Scalar a, Scalar f) {
    return (Scalar(1) + Scalar(3) * (a / z0) * f) / (z0 * z0 * z0);
}

} // namespace rydcp
