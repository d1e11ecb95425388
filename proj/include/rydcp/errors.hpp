#pragma once

#include <stdexcept>
#include <string>

namespace rydcp {

enum class ErrorCode {
    invalid_argument,
    invalid_quantum_number,
    incompatible_units,
    out_of_span,
    undersampling,
    nonpositive_distance,
    amplitude_exceeds_distance,
    detuned_input,
    window_mismatch,
    grid_resolution,
    support_touches_wall,
    invalid_geometry,
    quadrature_nonconvergence,
    parse_error,
    config_error,
    cap_exceeded,
    io_error,
};

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

    /// True for failures of the numerics rather than of the inputs.
    [[nodiscard]] bool is_numerical() const noexcept {
        return code_ == ErrorCode::quadrature_nonconvergence;
    }

private:
    ErrorCode code_;
};

[[nodiscard]] const char* to_string(ErrorCode code) noexcept;

} // namespace rydcp
