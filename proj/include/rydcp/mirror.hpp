#pragma once

#include <Eigen/Core>

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <variant>
#include <vector>

namespace rydcp {

/// f(t) = sin(omega t + phase).
struct Harmonic {
    double omega;
    double phase = 0.0;
};

/// Ideal pulse train: s(t) = 1 for the first `duty` fraction of every period
/// 2 pi / rep_rate, 0 otherwise. The normalized shape is f = s - duty, which
/// has zero mean and a peak-to-peak excursion of exactly 1, i.e. the mirror
/// switches between two positions a apart.
struct SquareTrain {
    double rep_rate;
    double duty;
};

/// Linearly interpolated samples (time in s, |value| <= 1).
class TabulatedShape {
public:
    TabulatedShape(std::vector<double> times, std::vector<double> values);

    [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] double front() const noexcept { return times_.front(); }
    [[nodiscard]] double back() const noexcept { return times_.back(); }

    /// Throws Error(out_of_span) outside [front(), back()].
    [[nodiscard]] double operator()(double t) const;

private:
    std::vector<double> times_;
    std::vector<double> values_;
};

/// Two-column text (time_s, f), '#' comments, strictly increasing time.
[[nodiscard]] TabulatedShape read_tabulated_shape(std::istream& in);
[[nodiscard]] TabulatedShape load_tabulated_shape(const std::filesystem::path& path);

using MotionShape = std::variant<Harmonic, SquareTrain, TabulatedShape>;

/// z(t) = z0 - a f(t), with 0 <= a < z0 and |f| <= 1.
class MirrorMotion {
public:
    MirrorMotion(double z0, double amplitude, MotionShape shape);

    [[nodiscard]] double z0() const noexcept { return z0_; }
    [[nodiscard]] double amplitude() const noexcept { return amplitude_; }
    [[nodiscard]] const MotionShape& shape() const noexcept { return shape_; }

private:
    double z0_;
    double amplitude_;
    MotionShape shape_;
};

[[nodiscard]] double evaluate_shape(const MirrorMotion& m, double t);

[[nodiscard]] double distance(const MirrorMotion& m, double t);

/// Points in (lo, hi) where f jumps or kinks, plus lo and hi themselves.
[[nodiscard]] std::vector<double> shape_breakpoints(const MotionShape& shape, double lo, double hi);

/// Highest frequency the shape carries in a meaningful way (rad/s). For a
/// table this is 1/16 of its Nyquist frequency.
[[nodiscard]] double characteristic_frequency(const MotionShape& shape);

/// g(omega) = (1/sqrt(2 pi)) * integral_0^window f(t) e^{i omega t} dt on the
/// grid omega_k = k * 2 pi / window, |k| <= n_samples / 2.
struct MotionSpectrum {
    Eigen::ArrayXd omegas;
    Eigen::ArrayXcd g;
    double window = 0.0;

    [[nodiscard]] double spacing() const {
        return omegas.size() > 1 ? omegas[1] - omegas[0] : 0.0;
    }
};

/// Windowed transform at a single frequency, integrated exactly piece by
/// piece (closed form for harmonic and square shapes, exact piecewise-linear
/// integration for tables).
[[nodiscard]] std::complex<double> shape_transform(const MotionShape& shape, double window, double omega);

/// Throws Error(undersampling) unless
/// n_samples >= 32 * window * characteristic_frequency / (2 pi).
[[nodiscard]] MotionSpectrum spectrum(const MirrorMotion& m, double window, int n_samples);

} // namespace rydcp
