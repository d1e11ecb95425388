#include "rydcp/quantities.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <numbers>
#include <string>

#include "rydcp/errors.hpp"

namespace rydcp {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct UnitInfo {
    Unit unit;
    Dimension dimension;
    double factor;
    std::string_view symbol;
};

constexpr std::array<UnitInfo, 20> unit_table{{
    {Unit::cm, Dimension::length, 1.0, "cm"},
    {Unit::m, Dimension::length, 1e2, "m"},
    {Unit::mm, Dimension::length, 1e-1, "mm"},
    {Unit::um, Dimension::length, 1e-4, "um"},
    {Unit::nm, Dimension::length, 1e-7, "nm"},
    {Unit::s, Dimension::time, 1.0, "s"},
    {Unit::ms, Dimension::time, 1e-3, "ms"},
    {Unit::us, Dimension::time, 1e-6, "us"},
    {Unit::ns, Dimension::time, 1e-9, "ns"},
    {Unit::ps, Dimension::time, 1e-12, "ps"},
    {Unit::rad_per_s, Dimension::frequency, 1.0, "rad/s"},
    {Unit::Hz, Dimension::frequency, two_pi, "Hz"},
    {Unit::kHz, Dimension::frequency, two_pi * 1e3, "kHz"},
    {Unit::MHz, Dimension::frequency, two_pi * 1e6, "MHz"},
    {Unit::GHz, Dimension::frequency, two_pi * 1e9, "GHz"},
    {Unit::erg, Dimension::energy, 1.0, "erg"},
    {Unit::eV, Dimension::energy, erg_per_ev, "eV"},
    {Unit::statC, Dimension::charge, 1.0, "statC"},
    {Unit::statC2_cm2, Dimension::dipole_squared, 1.0, "statC^2*cm^2"},
    {Unit::dimensionless, Dimension::dimensionless, 1.0, ""},
}};

const UnitInfo& info(Unit unit) noexcept {
    for (const auto& entry : unit_table)
        if (entry.unit == unit) return entry;
    return unit_table.back();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

Dimension dimension_of(Unit unit) noexcept { return info(unit).dimension; }

double cgs_factor(Unit unit) noexcept { return info(unit).factor; }

std::string_view symbol(Unit unit) noexcept { return info(unit).symbol; }

Quantity convert(Quantity q, Unit target) {
    if (dimension_of(q.unit) != dimension_of(target)) {
        throw Error(ErrorCode::incompatible_units,
                    "cannot convert '" + std::string(symbol(q.unit)) + "' to '" +
                        std::string(symbol(target)) + "'");
    }
    if (q.unit == target) return q;
    return {q.value * cgs_factor(q.unit) / cgs_factor(target), target};
}

double to_cgs(Quantity q) noexcept { return q.value * cgs_factor(q.unit); }

Unit parse_unit(std::string_view text) {
    text = trim(text);
    if (text.empty() || text == "1") return Unit::dimensionless;
    if (text == "\xC2\xB5m" || text == "\xCE\xBCm" || text == "micron") return Unit::um;
    if (text == "\xC2\xB5s" || text == "\xCE\xBCs") return Unit::us;
    if (text == "rad s^-1" || text == "rad/sec" || text == "1/s") return Unit::rad_per_s;
    if (text == "statC2cm2" || text == "statC^2 cm^2") return Unit::statC2_cm2;
    for (const auto& entry : unit_table)
        if (!entry.symbol.empty() && entry.symbol == text) return entry.unit;
    throw Error(ErrorCode::parse_error, "unknown unit '" + std::string(text) + "'");
}

Quantity parse_quantity(std::string_view text) {
    const std::string_view body = trim(text);
    double value = 0.0;
    const auto* first = body.data();
    const auto* last = body.data() + body.size();
    // from_chars rejects a leading '+'
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr == first) {
        throw Error(ErrorCode::parse_error, "expected a number in '" + std::string(text) + "'");
    }
    const auto rest = body.substr(static_cast<std::size_t>(ptr - body.data()));
    return {value, parse_unit(rest)};
}

std::string to_string(Quantity q) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", q.value);
    std::string out(buf);
    if (q.unit != Unit::dimensionless) {
        out += ' ';
        out += symbol(q.unit);
    }
    return out;
}

} // namespace rydcp
