#include "rydcp/gas.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>

#include "rydcp/errors.hpp"
#include "rydcp/excitation.hpp"

namespace rydcp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double gaussian_mass_fraction() {
    return std::erf(Gaussian::truncation / std::numbers::sqrt2);
}

double interpolate(const TabulatedDensity& table, double z) {
    if (z < table.z.front() || z > table.z.back()) return 0.0;
    auto it = std::upper_bound(table.z.begin(), table.z.end(), z);
    if (it == table.z.end()) return table.rho.back();
    const auto hi = static_cast<std::size_t>(it - table.z.begin());
    const auto lo = hi - 1;
    const double w = (z - table.z[lo]) / (table.z[hi] - table.z[lo]);
    return table.rho[lo] + w * (table.rho[hi] - table.rho[lo]);
}

void validate_table(const TabulatedDensity& table) {
    if (table.z.size() != table.rho.size() || table.z.size() < 2)
        throw Error(ErrorCode::invalid_argument,
                    "tabulated density: need two equal-length columns with >= 2 rows");
    for (std::size_t i = 0; i < table.z.size(); ++i) {
        if (!std::isfinite(table.z[i]) || !std::isfinite(table.rho[i]))
            throw Error(ErrorCode::invalid_argument, "tabulated density: non-finite entry");
        if (table.rho[i] < 0.0)
            throw Error(ErrorCode::invalid_argument, "tabulated density: negative density");
        if (i > 0 && !(table.z[i] > table.z[i - 1]))
            throw Error(ErrorCode::invalid_argument,
                        "tabulated density: z must be strictly increasing");
    }
    if (!(table.z.front() > 0.0))
        throw Error(ErrorCode::invalid_geometry, "tabulated density: support reaches z <= 0");
}

} // namespace

double tabulated_integral(const TabulatedDensity& table) {
    std::vector<double> pieces;
    pieces.reserve(table.z.size());
    for (std::size_t i = 0; i + 1 < table.z.size(); ++i)
        pieces.push_back(0.5 * (table.rho[i] + table.rho[i + 1]) * (table.z[i + 1] - table.z[i]));
    return pairwise_sum(std::span<const double>(pieces));
}

GasProfile::GasProfile(double n_atoms, ProfileShape shape, double transverse_extent)
    : n_atoms_(n_atoms), shape_(std::move(shape)), transverse_extent_(transverse_extent) {
    if (!(n_atoms_ > 0.0) || !std::isfinite(n_atoms_))
        throw Error(ErrorCode::invalid_argument, "gas: atom number must be positive");
    if (!(transverse_extent_ > 0.0))
        throw Error(ErrorCode::invalid_argument, "gas: transverse extent must be positive");
    std::visit(overloaded{
                   [](const Parabolic& p) {
                       if (!(p.half_width > 0.0) || !(p.z_center > 0.0))
                           throw Error(ErrorCode::invalid_argument,
                                       "parabolic profile: lengths must be positive");
                       if (!(p.z_center > p.half_width))
                           throw Error(ErrorCode::invalid_geometry,
                                       "parabolic profile: z_center must exceed half_width "
                                       "(support touches the mirror)");
                   },
                   [](const Gaussian& g) {
                       if (!(g.sigma_z > 0.0) || !(g.z_center > 0.0))
                           throw Error(ErrorCode::invalid_argument,
                                       "gaussian profile: lengths must be positive");
                       if (!(g.z_center > Gaussian::truncation * g.sigma_z))
                           throw Error(ErrorCode::invalid_geometry,
                                       "gaussian profile: truncated support reaches the mirror");
                   },
                   [this](TabulatedDensity& table) {
                       validate_table(table);
                       const double raw = tabulated_integral(table);
                       if (!(raw > 0.0))
                           throw Error(ErrorCode::invalid_argument,
                                       "tabulated density integrates to zero");
                       renormalization_ = n_atoms_ / raw;
                       for (double& r : table.rho) r *= renormalization_;
                   },
               },
               shape_);
}

std::pair<double, double> GasProfile::support() const {
    return std::visit(overloaded{
                          [](const Parabolic& p) {
                              return std::pair{p.z_center - p.half_width,
                                               p.z_center + p.half_width};
                          },
                          [](const Gaussian& g) {
                              const double reach = Gaussian::truncation * g.sigma_z;
                              return std::pair{g.z_center - reach, g.z_center + reach};
                          },
                          [](const TabulatedDensity& t) {
                              return std::pair{t.z.front(), t.z.back()};
                          },
                      },
                      shape_);
}

double GasProfile::centre() const {
    return std::visit(overloaded{
                          [](const Parabolic& p) { return p.z_center; },
                          [](const Gaussian& g) { return g.z_center; },
                          [](const TabulatedDensity& t) {
                              std::vector<double> moments;
                              std::vector<double> masses;
                              for (std::size_t i = 0; i + 1 < t.z.size(); ++i) {
                                  const double h = t.z[i + 1] - t.z[i];
                                  // exact first moment of the linear interpolant
                                  moments.push_back(h / 6.0 *
                                                    (t.rho[i] * (2.0 * t.z[i] + t.z[i + 1]) +
                                                     t.rho[i + 1] * (t.z[i] + 2.0 * t.z[i + 1])));
                                  masses.push_back(0.5 * h * (t.rho[i] + t.rho[i + 1]));
                              }
                              return pairwise_sum(std::span<const double>(moments)) /
                                     pairwise_sum(std::span<const double>(masses));
                          },
                      },
                      shape_);
}

TabulatedDensity read_tabulated_density(std::istream& in) {
    TabulatedDensity table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double z = 0.0;
        double rho = 0.0;
        std::string extra;
        if (!(fields >> z >> rho) || (fields >> extra)) {
            throw Error(ErrorCode::parse_error, "density table line " + std::to_string(line_no) +
                                                    ": expected 'z_cm rho_per_cm'");
        }
        if (!table.z.empty() && !(z > table.z.back())) {
            throw Error(ErrorCode::parse_error, "density table line " + std::to_string(line_no) +
                                                    ": z is not strictly increasing");
        }
        table.z.push_back(z);
        table.rho.push_back(rho);
    }
    return table;
}

TabulatedDensity load_tabulated_density(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open density table " + path.string());
    return read_tabulated_density(in);
}

double density(const GasProfile& p, double z) {
    if (!(z > 0.0)) throw Error(ErrorCode::nonpositive_distance, "density: z must be positive");
    const double n = p.n_atoms();
    return std::visit(overloaded{
                          [&](const Parabolic& s) {
                              const double r = s.half_width;
                              const double u = z - s.z_center;
                              if (std::abs(u) >= r) return 0.0;
                              return 3.0 * n / (4.0 * r * r * r) * (r * r - u * u);
                          },
                          [&](const Gaussian& s) {
                              const double u = (z - s.z_center) / s.sigma_z;
                              if (std::abs(u) > Gaussian::truncation) return 0.0;
                              return n * std::exp(-0.5 * u * u) /
                                     (s.sigma_z * std::sqrt(2.0 * std::numbers::pi) *
                                      gaussian_mass_fraction());
                          },
                          [&](const TabulatedDensity& s) { return interpolate(s, z); },
                      },
                      p.shape());
}

double excited_count_quadrature(const GasProfile& p, int n, double a, double t,
                                const QuadratureOptions& quad) {
    if (!(t >= 0.0))
        throw Error(ErrorCode::invalid_argument, "excited_count_quadrature: time must be >= 0");
    if (!(a >= 0.0))
        throw Error(ErrorCode::invalid_argument, "excited_count_quadrature: amplitude < 0");
    const auto [lo, hi] = p.support();
    if (!(lo > a)) {
        std::ostringstream msg;
        msg << "gas support starts at z = " << lo << " cm, within the mirror excursion a = " << a
            << " cm";
        throw Error(ErrorCode::support_touches_wall, msg.str());
    }
    if (t == 0.0 || a == 0.0) return 0.0;

    std::vector<double> points;
    if (const auto* table = std::get_if<TabulatedDensity>(&p.shape())) {
        points = table->z;
    } else {
        points = {lo, p.centre(), hi};
    }
    auto integrand = [&](double z) { return density(p, z) * probability_scaling(n, z, a, t); };
    return integrate(integrand, std::span<const double>(points), quad).value;
}

double parabolic_shape_factor(double zbar) {
    if (!(zbar > 1.0))
        throw Error(ErrorCode::invalid_geometry, "parabolic shape factor needs z_c / R_z > 1");
    const double x2 = zbar * zbar;
    const double d = x2 - 1.0;
    const double d3 = d * d * d;
    return (3.0 + 42.0 * x2 + 35.0 * x2 * x2) / (d3 * d3);
}

double excited_count_closed_form(const GasProfile& p, int n, double a, double t) {
    const auto* shape = std::get_if<Parabolic>(&p.shape());
    if (shape == nullptr)
        throw Error(ErrorCode::invalid_argument, "closed form exists for the parabolic profile only");
    if (n < 1)
        throw Error(ErrorCode::invalid_quantum_number, "principal quantum number must be >= 1");
    if (!(t >= 0.0) || !(a >= 0.0))
        throw Error(ErrorCode::invalid_argument, "excited_count_closed_form: negative input");
    const double r = shape->half_width;
    const double factor = parabolic_shape_factor(shape->z_center / r);
    const double n2 = static_cast<double>(n) * n;
    const double n4 = n2 * n2;
    const double r2 = r * r;
    const double r4 = r2 * r2;
    return scaling_constant() / 35.0 * factor * p.n_atoms() * a * a * (n4 * n4) * t * t /
           (r4 * r4);
}

} // namespace rydcp
