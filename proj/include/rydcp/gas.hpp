#pragma once

#include <filesystem>
#include <iosfwd>
#include <utility>
#include <variant>
#include <vector>

#include "rydcp/numerics.hpp"

namespace rydcp {

/// rho(z) = 3N / (4 R^3) [R^2 - (z - z_c)^2] on |z - z_c| < R.
struct Parabolic {
    double z_center;
    double half_width;
};

/// Gaussian truncated at +-6 sigma and renormalized to N over that support.
struct Gaussian {
    double z_center;
    double sigma_z;

    static constexpr double truncation = 6.0;
};

/// Linear density samples (z in cm, rho in 1/cm), linearly interpolated,
/// zero outside the table.
struct TabulatedDensity {
    std::vector<double> z;
    std::vector<double> rho;
};

using ProfileShape = std::variant<Parabolic, Gaussian, TabulatedDensity>;

class GasProfile {
public:
    /// Tabulated densities are rescaled so that their trapezoid integral is
    /// n_atoms; the factor applied is available from renormalization().
    GasProfile(double n_atoms, ProfileShape shape, double transverse_extent);

    [[nodiscard]] double n_atoms() const noexcept { return n_atoms_; }
    [[nodiscard]] const ProfileShape& shape() const noexcept { return shape_; }
    [[nodiscard]] double transverse_extent() const noexcept { return transverse_extent_; }
    [[nodiscard]] double renormalization() const noexcept { return renormalization_; }

    /// [z_min, z_max] outside of which rho vanishes.
    [[nodiscard]] std::pair<double, double> support() const;

    /// Mean position (z_center for the symmetric shapes).
    [[nodiscard]] double centre() const;

private:
    double n_atoms_;
    ProfileShape shape_;
    double transverse_extent_;
    double renormalization_ = 1.0;
};

/// Two-column text (z_cm, rho_per_cm) with '#' comments.
[[nodiscard]] TabulatedDensity read_tabulated_density(std::istream& in);
[[nodiscard]] TabulatedDensity load_tabulated_density(const std::filesystem::path& path);

/// Trapezoid integral of the raw table.
[[nodiscard]] double tabulated_integral(const TabulatedDensity& table);

[[nodiscard]] double density(const GasProfile& p, double z);

/// N_e = integral rho(z) P_e(z, t) dz with the scaling-law probability.
[[nodiscard]] double excited_count_quadrature(const GasProfile& p, int n, double a, double t,
                                              const QuadratureOptions& quad = {.rel_tol = 1e-9});

/// (3 + 42 x^2 + 35 x^4) / (x^2 - 1)^6 for x = z_c / R_z > 1.
[[nodiscard]] double parabolic_shape_factor(double zbar);

/// Closed form for the parabolic profile; prefactor is scaling_constant()/35.
[[nodiscard]] double excited_count_closed_form(const GasProfile& p, int n, double a, double t);

} // namespace rydcp
