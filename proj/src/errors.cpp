#include "rydcp/errors.hpp"

namespace rydcp {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_quantum_number: return "invalid-quantum-number";
    case ErrorCode::incompatible_units: return "incompatible-units";
    case ErrorCode::out_of_span: return "out-of-span";
    case ErrorCode::undersampling: return "undersampling";
    case ErrorCode::nonpositive_distance: return "nonpositive-distance";
    case ErrorCode::amplitude_exceeds_distance: return "amplitude-exceeds-distance";
    case ErrorCode::detuned_input: return "detuned-input";
    case ErrorCode::window_mismatch: return "window-mismatch";
    case ErrorCode::grid_resolution: return "grid-resolution";
    case ErrorCode::support_touches_wall: return "support-touches-wall";
    case ErrorCode::invalid_geometry: return "invalid-geometry";
    case ErrorCode::quadrature_nonconvergence: return "quadrature-nonconvergence";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::config_error: return "config-error";
    case ErrorCode::cap_exceeded: return "cap-exceeded";
    case ErrorCode::io_error: return "io-error";
    }
    return "unknown";
}

} // namespace rydcp
