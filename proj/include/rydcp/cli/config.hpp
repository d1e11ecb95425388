#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rydcp/excitation.hpp"
#include "rydcp/gas.hpp"
#include "rydcp/mirror.hpp"
#include "rydcp/validity.hpp"

// Scenario configuration (JSON). Dimensioned fields take either a number in
// cgs (cm, s, rad/s) or a unit-suffixed string such as "20 um", "0.5 us" or
// "30 GHz". See README.md for the full schema.

namespace rydcp::cli {

struct ShapeSpec {
    enum class Kind { harmonic, square_train, tabulated };
    Kind kind = Kind::harmonic;
    /// Drive frequency (rad/s); empty means "resonant with the transition".
    std::optional<double> omega;
    double phase = 0.0;
    double duty = 0.5;
    std::optional<TabulatedShape> table;
};

struct ProfileSpec {
    enum class Kind { parabolic, gaussian, tabulated };
    Kind kind = Kind::parabolic;
    double z_center = 0.0;
    /// half_width for parabolic, sigma_z for gaussian.
    double width = 0.0;
    std::optional<TabulatedDensity> table;
};

struct GasSpec {
    std::optional<double> n_atoms;
    double transverse_extent = 0.0;
    ProfileSpec profile;
};

/// Everything needed to evaluate one point.
struct Parameters {
    int n = 0;
    int n_prime = 0;
    std::optional<double> z0;
    double amplitude = 0.0;
    ShapeSpec shape;
    std::optional<GasSpec> gas;
    double time = 0.0;
    Method method = Method::time_domain;
    int spectral_samples = 0;
    std::optional<PhotonInputs> photon;
    std::optional<double> nearest_neighbor;
    TimeDomainOptions time_domain{};
};

struct SweepAxis {
    std::string parameter;
    std::vector<double> values;
};

struct Outputs {
    bool probability = true;
    bool amplitude = true;
    bool excited_count = true;
    bool excited_count_closed_form = true;
    bool validity = true;
    bool photon = true;
    bool hierarchy = true;
};

struct ScenarioConfig {
    Parameters base;
    std::vector<SweepAxis> axes;
    std::size_t max_points = 1'000'000;
    Outputs outputs;
};

/// Parameters accepted as sweep axes.
[[nodiscard]] const std::vector<std::string_view>& sweep_parameters();

/// Throws Error(parse_error) for malformed JSON and Error(config_error) naming
/// the offending key for schema or invariant violations. Relative table
/// paths resolve against `base_dir`.
[[nodiscard]] ScenarioConfig parse_config_text(std::string_view text,
                                               const std::filesystem::path& base_dir = {});

[[nodiscard]] ScenarioConfig parse_config(const std::filesystem::path& path);

/// Sets one sweep parameter; n keeps n' - n fixed.
void apply_axis(Parameters& p, std::string_view parameter, double value);

/// Builds the library scenario, validating every module invariant. Errors
/// are rethrown with the config key path prepended.
[[nodiscard]] Scenario materialize(const Parameters& p);

} // namespace rydcp::cli
