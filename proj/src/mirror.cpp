#include "rydcp/mirror.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>

#include "rydcp/errors.hpp"
#include "rydcp/numerics.hpp"

namespace rydcp {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr std::complex<double> imag_unit{0.0, 1.0};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate_shape(const MotionShape& shape) {
    std::visit(overloaded{
                   [](const Harmonic& h) {
                       if (!std::isfinite(h.omega) || h.omega < 0.0 || !std::isfinite(h.phase))
                           throw Error(ErrorCode::invalid_argument,
                                       "harmonic shape: omega must be finite and >= 0");
                   },
                   [](const SquareTrain& s) {
                       if (!(s.rep_rate > 0.0) || !std::isfinite(s.rep_rate))
                           throw Error(ErrorCode::invalid_argument,
                                       "square train: rep_rate must be positive");
                       if (!(s.duty > 0.0 && s.duty < 1.0))
                           throw Error(ErrorCode::invalid_argument,
                                       "square train: duty must lie in (0, 1)");
                   },
                   [](const TabulatedShape&) {},
               },
               shape);
}

// integral_0^1 (1-u) e^{i theta u} du and integral_0^1 u e^{i theta u} du
std::pair<std::complex<double>, std::complex<double>> linear_weights(double theta) {
    if (std::abs(theta) < 0.5) {
        std::complex<double> a{0.0, 0.0};
        std::complex<double> b{0.0, 0.0};
        std::complex<double> power{1.0, 0.0};  // (i theta)^k / k!
        for (int k = 0; k < 24; ++k) {
            a += power / static_cast<double>((k + 1) * (k + 2));
            b += power / static_cast<double>(k + 2);
            power *= imag_unit * theta / static_cast<double>(k + 1);
        }
        return {a, b};
    }
    const std::complex<double> e = std::polar(1.0, theta);
    const std::complex<double> whole = (e - 1.0) / (imag_unit * theta);
    const std::complex<double> b = -imag_unit * e / theta + (e - 1.0) / (theta * theta);
    return {whole - b, b};
}

std::complex<double> harmonic_transform(const Harmonic& h, double window, double omega) {
    const auto up = std::polar(1.0, h.phase) * phase_integral(omega + h.omega, window);
    const auto down = std::polar(1.0, -h.phase) * phase_integral(omega - h.omega, window);
    return (up - down) / (2.0 * imag_unit);
}

std::complex<double> square_transform(const SquareTrain& s, double window, double omega) {
    const double period = two_pi / s.rep_rate;
    const double width = s.duty * period;
    std::vector<std::complex<double>> pieces;
    for (long j = 0;; ++j) {
        const double start = static_cast<double>(j) * period;
        if (start >= window) break;
        const double stop = std::min(start + width, window);
        pieces.push_back(std::polar(1.0, omega * start) * phase_integral(omega, stop - start));
    }
    const auto pulses = pairwise_sum(std::span<const std::complex<double>>(pieces));
    return pulses - s.duty * phase_integral(omega, window);
}

// Linear pieces of a table clipped to [0, window], prepared once so that the
// per-frequency work is a single pass without searches.
struct LinearPieces {
    std::vector<double> start;
    std::vector<double> width;
    std::vector<double> f_start;
    std::vector<double> f_stop;
    bool uniform = true;
};

LinearPieces clip_table(const TabulatedShape& table, double window) {
    if (table.front() > 0.0 || table.back() < window) {
        throw Error(ErrorCode::out_of_span,
                    "tabulated shape does not cover the transform window [0, " +
                        std::to_string(window) + "] s");
    }
    const auto& ts = table.times();
    LinearPieces pieces;
    for (std::size_t j = 0; j + 1 < ts.size(); ++j) {
        const double lo = std::max(ts[j], 0.0);
        const double hi = std::min(ts[j + 1], window);
        if (!(hi > lo)) continue;
        pieces.start.push_back(lo);
        pieces.width.push_back(hi - lo);
        pieces.f_start.push_back(table(lo));
        pieces.f_stop.push_back(table(hi));
    }
    const double first = pieces.width.front();
    for (double w : pieces.width)
        if (std::abs(w - first) > 1e-9 * first) pieces.uniform = false;
    return pieces;
}

std::complex<double> linear_transform(const LinearPieces& pieces, double omega,
                                      std::vector<std::complex<double>>& scratch) {
    const std::size_t count = pieces.start.size();
    scratch.resize(count);
    auto weights = linear_weights(omega * pieces.width.front());
    if (!pieces.uniform) {
        for (std::size_t j = 0; j < count; ++j) {
            weights = linear_weights(omega * pieces.width[j]);
            scratch[j] = pieces.width[j] * std::polar(1.0, omega * pieces.start[j]) *
                         (pieces.f_start[j] * weights.first + pieces.f_stop[j] * weights.second);
        }
        return pairwise_sum(std::span<const std::complex<double>>(scratch));
    }
    // Uniform pieces (widths equal to 1e-9): advance the phase by a fixed
    // rotation and re-anchor it exactly every few steps, so the phase slip
    // stays below 16 * pi * 1e-9 rad even at the table's Nyquist frequency.
    // Products are spelled out: std::complex multiplication goes through the
    // inf/nan-careful library routine, which dominates this loop otherwise.
    constexpr std::size_t anchor_every = 16;
    const std::complex<double> step = std::polar(1.0, omega * pieces.width.front());
    const auto [wa, wb] = weights;
    double re = 1.0;
    double im = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        if (j % anchor_every == 0) {
            re = std::cos(omega * pieces.start[j]);
            im = std::sin(omega * pieces.start[j]);
        } else {
            const double next = re * step.real() - im * step.imag();
            im = re * step.imag() + im * step.real();
            re = next;
        }
        const double fa = pieces.f_start[j];
        const double fb = pieces.f_stop[j];
        const double cr = fa * wa.real() + fb * wb.real();
        const double ci = fa * wa.imag() + fb * wb.imag();
        scratch[j] = {pieces.width[j] * (re * cr - im * ci), pieces.width[j] * (re * ci + im * cr)};
    }
    return pairwise_sum(std::span<const std::complex<double>>(scratch));
}

} // namespace

TabulatedShape::TabulatedShape(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() != values_.size())
        throw Error(ErrorCode::invalid_argument, "tabulated shape: column lengths differ");
    if (times_.size() < 2)
        throw Error(ErrorCode::invalid_argument, "tabulated shape: need at least two samples");
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!std::isfinite(times_[i]) || !std::isfinite(values_[i]))
            throw Error(ErrorCode::invalid_argument, "tabulated shape: non-finite sample");
        if (i > 0 && !(times_[i] > times_[i - 1]))
            throw Error(ErrorCode::invalid_argument,
                        "tabulated shape: times must be strictly increasing (sample " +
                            std::to_string(i) + ")");
        if (std::abs(values_[i]) > 1.0 + 1e-12)
            throw Error(ErrorCode::invalid_argument,
                        "tabulated shape: |f| exceeds 1 at sample " + std::to_string(i));
    }
}

double TabulatedShape::operator()(double t) const {
    if (!(t >= times_.front() && t <= times_.back())) {
        std::ostringstream msg;
        msg << "tabulated shape: t = " << t << " s outside [" << times_.front() << ", "
            << times_.back() << "]";
        throw Error(ErrorCode::out_of_span, msg.str());
    }
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.end()) return values_.back();
    const auto hi = static_cast<std::size_t>(it - times_.begin());
    const auto lo = hi - 1;
    const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
    return values_[lo] + w * (values_[hi] - values_[lo]);
}

TabulatedShape read_tabulated_shape(std::istream& in) {
    std::vector<double> times;
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        double t = 0.0;
        double f = 0.0;
        if (!(fields >> t)) {
            if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
            throw Error(ErrorCode::parse_error,
                        "shape table line " + std::to_string(line_no) + ": expected 'time value'");
        }
        fields >> std::ws;
        if (fields.peek() == ',') fields.get();
        std::string extra;
        if (!(fields >> f) || (fields >> extra)) {
            throw Error(ErrorCode::parse_error,
                        "shape table line " + std::to_string(line_no) + ": expected two columns");
        }
        if (!times.empty() && !(t > times.back())) {
            throw Error(ErrorCode::parse_error, "shape table line " + std::to_string(line_no) +
                                                    ": time is not strictly increasing");
        }
        times.push_back(t);
        values.push_back(f);
    }
    return TabulatedShape(std::move(times), std::move(values));
}

TabulatedShape load_tabulated_shape(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open shape table " + path.string());
    return read_tabulated_shape(in);
}

MirrorMotion::MirrorMotion(double z0, double amplitude, MotionShape shape)
    : z0_(z0), amplitude_(amplitude), shape_(std::move(shape)) {
    if (!(z0_ > 0.0) || !std::isfinite(z0_))
        throw Error(ErrorCode::nonpositive_distance, "mirror: z0 must be positive");
    if (!(amplitude_ >= 0.0))
        throw Error(ErrorCode::invalid_argument, "mirror: amplitude must be >= 0");
    if (!(amplitude_ < z0_))
        throw Error(ErrorCode::amplitude_exceeds_distance,
                    "mirror: amplitude must be smaller than z0");
    validate_shape(shape_);
}

double evaluate_shape(const MirrorMotion& m, double t) {
    if (!(t >= 0.0)) throw Error(ErrorCode::invalid_argument, "shape evaluated at negative time");
    return std::visit(overloaded{
                          [t](const Harmonic& h) { return std::sin(h.omega * t + h.phase); },
                          [t](const SquareTrain& s) {
                              const double cycles = t * s.rep_rate / two_pi;
                              const double frac = cycles - std::floor(cycles);
                              return (frac < s.duty ? 1.0 : 0.0) - s.duty;
                          },
                          [t](const TabulatedShape& table) { return table(t); },
                      },
                      m.shape());
}

double distance(const MirrorMotion& m, double t) {
    return m.z0() - m.amplitude() * evaluate_shape(m, t);
}

std::vector<double> shape_breakpoints(const MotionShape& shape, double lo, double hi) {
    std::vector<double> points{lo};
    if (const auto* s = std::get_if<SquareTrain>(&shape)) {
        const double period = two_pi / s->rep_rate;
        const auto first = static_cast<long>(std::floor(lo / period));
        for (long j = first;; ++j) {
            const double start = static_cast<double>(j) * period;
            if (start >= hi) break;
            const double stop = start + s->duty * period;
            if (start > lo) points.push_back(start);
            if (stop > lo && stop < hi) points.push_back(stop);
        }
    } else if (const auto* table = std::get_if<TabulatedShape>(&shape)) {
        for (double t : table->times())
            if (t > lo && t < hi) points.push_back(t);
    }
    points.push_back(hi);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

double characteristic_frequency(const MotionShape& shape) {
    return std::visit(overloaded{
                          [](const Harmonic& h) { return h.omega; },
                          [](const SquareTrain& s) { return s.rep_rate; },
                          [](const TabulatedShape& table) {
                              const double mean_step = (table.back() - table.front()) /
                                                       static_cast<double>(table.times().size() - 1);
                              return std::numbers::pi / mean_step / 16.0;
                          },
                      },
                      shape);
}

std::complex<double> shape_transform(const MotionShape& shape, double window, double omega) {
    const std::complex<double> raw =
        std::visit(overloaded{
                       [&](const Harmonic& h) { return harmonic_transform(h, window, omega); },
                       [&](const SquareTrain& s) { return square_transform(s, window, omega); },
                       [&](const TabulatedShape& t) {
                           std::vector<std::complex<double>> scratch;
                           return linear_transform(clip_table(t, window), omega, scratch);
                       },
                   },
                   shape);
    return raw / std::sqrt(two_pi);
}

MotionSpectrum spectrum(const MirrorMotion& m, double window, int n_samples) {
    if (!(window > 0.0) || !std::isfinite(window))
        throw Error(ErrorCode::invalid_argument, "spectrum: window must be positive");
    const double needed = 32.0 * window * characteristic_frequency(m.shape()) / two_pi;
    if (n_samples < 2 || static_cast<double>(n_samples) < needed) {
        std::ostringstream msg;
        msg << "spectrum: " << n_samples << " samples undersample the motion; need at least "
            << std::ceil(needed) << " (32 per period over the window)";
        throw Error(ErrorCode::undersampling, msg.str());
    }
    const int half = n_samples / 2;
    const double step = two_pi / window;
    MotionSpectrum out;
    out.window = window;
    out.omegas.resize(2 * half + 1);
    out.g.resize(2 * half + 1);
    const double norm = 1.0 / std::sqrt(two_pi);
    if (const auto* table = std::get_if<TabulatedShape>(&m.shape())) {
        const auto pieces = clip_table(*table, window);
        std::vector<std::complex<double>> scratch;
        for (int k = -half; k <= half; ++k) {
            const double omega = step * k;
            out.omegas[k + half] = omega;
            out.g[k + half] = norm * linear_transform(pieces, omega, scratch);
        }
        return out;
    }
    for (int k = -half; k <= half; ++k) {
        const double omega = step * k;
        out.omegas[k + half] = omega;
        out.g[k + half] = shape_transform(m.shape(), window, omega);
    }
    return out;
}

} // namespace rydcp
