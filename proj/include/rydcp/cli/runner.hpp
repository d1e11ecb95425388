#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rydcp/cli/config.hpp"
#include "rydcp/validity.hpp"

namespace rydcp::cli {

struct ResultRow {
    /// Sweep coordinates first (axis order), then the remaining scenario inputs.
    std::vector<std::pair<std::string, double>> inputs;
    std::string method;
    std::optional<double> probability;
    std::optional<double> amplitude_abs;
    std::optional<double> excited_count;
    std::optional<double> excited_count_closed_form;
    std::optional<ValidityReport> validity;
    /// Non-empty when this point failed; the sweep carries on.
    std::string error;
    bool numerical_failure = false;
};

/// Evaluates a single configuration. Throws if the config has sweep axes.
[[nodiscard]] ResultRow run_single(const ScenarioConfig& cfg);

/// Row order is lexicographic over the axes, first axis slowest, whatever
/// `jobs` is. Throws Error(cap_exceeded) above cfg.max_points.
[[nodiscard]] std::vector<ResultRow> run_sweep(const ScenarioConfig& cfg, unsigned jobs = 1);

enum class Format { csv, json };

/// Column names for the rows of `cfg`; fixed for a given config.
[[nodiscard]] std::vector<std::string> columns(const ScenarioConfig& cfg);

void write_rows(std::ostream& out, const ScenarioConfig& cfg, std::span<const ResultRow> rows,
                Format format);

void write_report(std::ostream& out, const ValidityReport& report, Format format);

} // namespace rydcp::cli
