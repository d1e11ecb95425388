#pragma once

#include <string>
#include <string_view>

// Gaussian cgs throughout. Inputs given in SI-flavoured units (um, us, GHz)
// are converted once, at the boundary, through convert() / to_cgs().

namespace rydcp {

/// CODATA-2018 values expressed in Gaussian cgs.
///
/// | field          | value                 | unit     |
/// |----------------|-----------------------|----------|
/// | electron_charge| 4.803204712570263e-10 | statC    |
/// | bohr_radius    | 5.29177210903e-9      | cm       |
/// | hbar           | 1.054571817e-27       | erg s    |
/// | light_speed    | 2.99792458e10         | cm/s     |
/// | rydberg_energy | 2.1798723611035e-11   | erg      |
struct PhysicalConstants {
    double electron_charge;
    double bohr_radius;
    double hbar;
    double light_speed;
    double rydberg_energy;
};

[[nodiscard]] constexpr PhysicalConstants constants() noexcept {
    // e = 1.602176634e-19 C times 2.99792458e9 statC/C (exact product)
    return PhysicalConstants{
        4.803204712570263e-10,
        5.29177210903e-9,
        1.054571817e-27,
        2.99792458e10,
        2.1798723611035e-11,
    };
}

inline constexpr double erg_per_ev = 1.602176634e-12;

enum class Dimension {
    length,
    time,
    frequency,
    energy,
    charge,
    dipole_squared,
    dimensionless,
};

enum class Unit {
    cm,
    m,
    mm,
    um,
    nm,
    s,
    ms,
    us,
    ns,
    ps,
    rad_per_s,
    Hz,
    kHz,
    MHz,
    GHz,
    erg,
    eV,
    statC,
    statC2_cm2,
    dimensionless,
};

struct Quantity {
    double value;
    Unit unit;
};

[[nodiscard]] Dimension dimension_of(Unit unit) noexcept;

/// Factor taking a value in `unit` to the cgs base of its dimension
/// (cm, s, rad/s, erg, statC, statC^2 cm^2). Hz-type units carry the 2*pi.
[[nodiscard]] double cgs_factor(Unit unit) noexcept;

[[nodiscard]] std::string_view symbol(Unit unit) noexcept;

/// Throws Error(incompatible_units) across dimensions.
[[nodiscard]] Quantity convert(Quantity q, Unit target);

[[nodiscard]] double to_cgs(Quantity q) noexcept;

/// Accepts "um", "μm", "GHz", "rad/s", ... Throws Error(parse_error).
[[nodiscard]] Unit parse_unit(std::string_view text);

/// Parses "20 um", "2e-4cm", "0.5 us" or a bare number (dimensionless).
[[nodiscard]] Quantity parse_quantity(std::string_view text);

[[nodiscard]] std::string to_string(Quantity q);

} // namespace rydcp
