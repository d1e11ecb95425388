#include "rydcp/atom.hpp"

#include <string>

#include "rydcp/errors.hpp"
#include "rydcp/quantities.hpp"

namespace rydcp {

double transition_frequency(int n, int n_prime) {
    if (n < 1 || n >= n_prime) {
        throw Error(ErrorCode::invalid_quantum_number,
                    "transition " + std::to_string(n) + " -> " + std::to_string(n_prime) +
                        ": need 1 <= n < n'");
    }
    const auto c = constants();
    const double inv_n = 1.0 / n;
    const double inv_np = 1.0 / n_prime;
    return c.rydberg_energy * (inv_n - inv_np) * (inv_n + inv_np) / c.hbar;
}

double dipole_sq_scale(int n) {
    if (n < 1)
        throw Error(ErrorCode::invalid_quantum_number, "principal quantum number must be >= 1");
    const auto c = constants();
    const double ea0 = c.electron_charge * c.bohr_radius;
    const double n2 = static_cast<double>(n) * n;
    return ea0 * ea0 * n2 * n2;
}

RydbergTransition make_transition(int n, int n_prime) {
    return {n, n_prime, transition_frequency(n, n_prime), dipole_sq_scale(n)};
}

} // namespace rydcp
