#include "rydcp/validity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rydcp/coupling.hpp"
#include "rydcp/errors.hpp"
#include "rydcp/quantities.hpp"

namespace rydcp {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Flag below(double value, double ok_limit, double marginal_limit) {
    if (value < ok_limit) return Flag::ok;
    if (value < marginal_limit) return Flag::marginal;
    return Flag::invalid;
}

int spectral_sample_count(const Scenario& s) {
    if (s.spectral_samples > 0) return s.spectral_samples;
    const double fastest =
        std::max(s.transition.omega0, characteristic_frequency(s.mirror.shape()));
    const auto needed = static_cast<int>(std::ceil(32.0 * s.time * fastest / two_pi));
    return std::max(64, needed + needed % 2);
}

} // namespace

const char* to_string(Flag flag) noexcept {
    switch (flag) {
    case Flag::ok: return "ok";
    case Flag::marginal: return "marginal";
    case Flag::invalid: return "invalid";
    }
    return "unknown";
}

RatioCheck check_near_zone(double z_max, double omega0) {
    if (!(z_max > 0.0) || !(omega0 > 0.0))
        throw Error(ErrorCode::invalid_argument, "check_near_zone: inputs must be positive");
    const double wavelength = two_pi * constants().light_speed / omega0;
    const double ratio = z_max / wavelength;
    return {ratio, below(ratio, 0.05, 0.2)};
}

AmplitudeCheck check_amplitude(double a, double z0) {
    if (!(z0 > 0.0)) throw Error(ErrorCode::nonpositive_distance, "check_amplitude: z0 <= 0");
    if (!(a >= 0.0)) throw Error(ErrorCode::invalid_argument, "check_amplitude: a < 0");
    if (!(a < z0))
        throw Error(ErrorCode::amplitude_exceeds_distance, "check_amplitude: a >= z0");
    const double ratio = a / z0;
    Flag flag = Flag::invalid;
    if (ratio <= 0.1)
        flag = Flag::ok;
    else if (ratio <= 0.3)
        flag = Flag::marginal;
    return {ratio, flag, 6.0 * ratio * ratio};
}

Flag check_perturbative(double max_probability) {
    if (!(max_probability >= 0.0))
        throw Error(ErrorCode::invalid_argument, "check_perturbative: probability must be >= 0");
    return below(max_probability, 0.1, 0.5);
}

double photon_excitation_bound(double photon_areal_density, double front_area) {
    if (!(photon_areal_density >= 0.0) || !(front_area >= 0.0))
        throw Error(ErrorCode::invalid_argument, "photon_excitation_bound: negative input");
    return photon_areal_density * front_area;
}

double interaction_hierarchy(const RydbergTransition& tr, double z0, double nearest_neighbor) {
    if (!(z0 > 0.0) || !(nearest_neighbor > 0.0))
        throw Error(ErrorCode::invalid_argument, "interaction_hierarchy: distances must be positive");
    const double wall = std::abs(
        static_cp_potential(DipoleExpectation<double>::isotropic(tr.dipole_sq), z0));
    const double d_sq = tr.dipole_sq / 4.0;  // sigma has trace 4
    const double c6 = 0.75 * d_sq * d_sq / (constants().hbar * tr.omega0);
    const double r3 = nearest_neighbor * nearest_neighbor * nearest_neighbor;
    const double pair = c6 / (r3 * r3);
    if (pair == 0.0) return std::numeric_limits<double>::infinity();
    return wall / pair;
}

ExcitationResult single_atom_excitation(const Scenario& s) {
    switch (s.method) {
    case Method::time_domain:
        return amplitude_time_domain(s.transition, s.mirror, s.time, s.time_domain);
    case Method::resonant_rwa: return probability_resonant(s.transition, s.mirror, s.time);
    case Method::scaling_law:
        return {std::nullopt,
                probability_scaling(s.transition.n_initial, s.mirror.z0(), s.mirror.amplitude(),
                                    s.time),
                Method::scaling_law};
    case Method::spectral: {
        if (s.time == 0.0) return {std::complex<double>{0.0, 0.0}, 0.0, Method::spectral};
        const auto spec = spectrum(s.mirror, s.time, spectral_sample_count(s));
        return amplitude_spectral(s.transition, s.mirror, spec, s.time);
    }
    }
    throw Error(ErrorCode::invalid_argument, "unknown method");
}

ValidityReport full_report(const Scenario& s) { return full_report(s, single_atom_excitation(s)); }

ValidityReport full_report(const Scenario& s, const ExcitationResult& single) {
    ValidityReport report;
    const double a = s.mirror.amplitude();
    const double z0 = s.mirror.z0();

    double z_max = z0 + a;
    report.max_probability = single.probability;
    report.max_probability_position = z0;
    if (s.gas) {
        const auto [lo, hi] = s.gas->support();
        z_max = hi;
        if (!(lo > a))
            throw Error(ErrorCode::support_touches_wall,
                        "gas support starts inside the mirror excursion");
        // P_e falls off as z^-8, so the near edge of the support dominates
        const double at_edge = probability_scaling(s.transition.n_initial, lo, a, s.time);
        if (at_edge > report.max_probability) {
            report.max_probability = at_edge;
            report.max_probability_position = lo;
        }
    }

    const auto near = check_near_zone(z_max, s.transition.omega0);
    report.near_zone_ratio = near.ratio;
    report.near_zone = near.flag;

    const auto amp = check_amplitude(a, z0);
    report.amplitude_ratio = amp.ratio;
    report.linearization_error = amp.linearization_error;
    report.amplitude = amp.flag;

    report.perturbative = check_perturbative(report.max_probability);

    if (s.photon) {
        const double bound = photon_excitation_bound(s.photon->areal_density, s.photon->front_area);
        report.photon_excitation_bound = bound;
        if (bound > 0.0) report.near_far_contrast = single.probability / bound;
    }
    if (s.nearest_neighbor)
        report.hierarchy_ratio = interaction_hierarchy(s.transition, z0, *s.nearest_neighbor);

    report.overall = worst(worst(report.near_zone, report.amplitude), report.perturbative);
    return report;
}

} // namespace rydcp
