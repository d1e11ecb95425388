#pragma once

#include <optional>

#include "rydcp/atom.hpp"
#include "rydcp/excitation.hpp"
#include "rydcp/gas.hpp"
#include "rydcp/mirror.hpp"

// Regime checks. Thresholds:
//
//   near zone     z_max / lambda0   ok < 0.05, marginal < 0.2, else invalid
//   amplitude     a / z0            ok <= 0.1, marginal <= 0.3, else invalid
//   perturbative  max P_e           ok < 0.1,  marginal < 0.5, else invalid
//
// The atom-atom hierarchy is a London-type C6 / r^6 estimate and is only good
// to an order of magnitude.

namespace rydcp {

enum class Flag { ok, marginal, invalid };

[[nodiscard]] const char* to_string(Flag flag) noexcept;

[[nodiscard]] constexpr Flag worst(Flag a, Flag b) noexcept { return a > b ? a : b; }

struct RatioCheck {
    double ratio;
    Flag flag;
};

[[nodiscard]] RatioCheck check_near_zone(double z_max, double omega0);

struct AmplitudeCheck {
    double ratio;
    Flag flag;
    /// 6 (a/z0)^2, the leading-order relative error of the linearized
    /// coupling. The pointwise error at the closest approach is larger:
    /// 1/(1 - x)^3 - 1 - 3x = 6x^2 + 10x^3 + ... with x = a/z0.
    double linearization_error;
};

[[nodiscard]] AmplitudeCheck check_amplitude(double a, double z0);

[[nodiscard]] Flag check_perturbative(double max_probability);

/// Number of far-field photons crossing the sample: areal density x area.
[[nodiscard]] double photon_excitation_bound(double photon_areal_density, double front_area);

/// |E_wall| / |E_atom-atom| with E_wall the static potential at z0 for
/// isotropic moments S/3 and E_aa = C6 / r^6, C6 = (3/4) (S/4)^2 / (hbar omega0).
[[nodiscard]] double interaction_hierarchy(const RydbergTransition& tr, double z0,
                                           double nearest_neighbor);

struct PhotonInputs {
    double areal_density;  // cm^-2
    double front_area;     // cm^2
};

struct Scenario {
    RydbergTransition transition;
    MirrorMotion mirror;
    double time;
    Method method = Method::time_domain;
    std::optional<GasProfile> gas;
    std::optional<PhotonInputs> photon;
    std::optional<double> nearest_neighbor;
    /// Time-sample count for the spectral method (0 picks the Nyquist minimum).
    int spectral_samples = 0;
    /// Coupling model and quadrature settings of the time-domain method.
    TimeDomainOptions time_domain{};
};

/// Single-atom result at the mirror's mean distance with the scenario method.
[[nodiscard]] ExcitationResult single_atom_excitation(const Scenario& s);

struct ValidityReport {
    double near_zone_ratio = 0.0;
    double amplitude_ratio = 0.0;
    double linearization_error = 0.0;
    double max_probability = 0.0;
    /// Position at which max_probability is attained (cm).
    double max_probability_position = 0.0;
    std::optional<double> photon_excitation_bound;
    std::optional<double> near_far_contrast;
    std::optional<double> hierarchy_ratio;

    Flag near_zone = Flag::ok;
    Flag amplitude = Flag::ok;
    Flag perturbative = Flag::ok;
    Flag overall = Flag::ok;
};

/// For a gas the near-zone check uses the far edge of the support and the
/// probability check the near edge; the amplitude check uses the mean
/// distance.
[[nodiscard]] ValidityReport full_report(const Scenario& s);

/// Same as full_report but reusing an already computed single-atom result.
[[nodiscard]] ValidityReport full_report(const Scenario& s, const ExcitationResult& single);

} // namespace rydcp
