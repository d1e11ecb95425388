// rydcp: evaluate dynamical Casimir-Polder excitation scenarios from JSON
// configs or built-in presets.
//
// Exit codes: 0 success, 1 configuration/validation error, 2 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rydcp/cli/config.hpp"
#include "rydcp/cli/presets.hpp"
#include "rydcp/cli/runner.hpp"
#include "rydcp/errors.hpp"

namespace {

using namespace rydcp::cli;

constexpr int exit_validation = 1;
constexpr int exit_numerical = 2;

struct Options {
    std::string config;
    std::string output;
    std::string format = "csv";
    unsigned jobs = 1;
    std::string preset;
};

Format parse_format(const std::string& s) { return s == "json" ? Format::json : Format::csv; }

void warn_renormalized(const ScenarioConfig& cfg) {
    const auto& gas = cfg.base.gas;
    if (!gas || !gas->profile.table || !gas->n_atoms) return;
    const double raw = rydcp::tabulated_integral(*gas->profile.table);
    if (raw > 0.0 && std::abs(*gas->n_atoms / raw - 1.0) > 0.01)
        std::fprintf(stderr, "warning: gas.profile: tabulated density rescaled by %.6g to hold %g atoms\n",
                     *gas->n_atoms / raw, *gas->n_atoms);
}

/// Runs `body` with the selected output stream.
template <typename F>
void with_output(const Options& opt, F&& body) {
    if (opt.output.empty() || opt.output == "-") {
        body(std::cout);
        return;
    }
    std::ofstream file(opt.output);
    if (!file) throw rydcp::Error(rydcp::ErrorCode::io_error, "cannot write " + opt.output);
    body(file);
}

int emit(const Options& opt, const ScenarioConfig& cfg, std::vector<ResultRow> rows) {
    with_output(opt, [&](std::ostream& out) { write_rows(out, cfg, rows, parse_format(opt.format)); });
    int status = 0;
    for (const auto& row : rows) {
        if (row.error.empty()) continue;
        std::fprintf(stderr, "error: %s\n", row.error.c_str());
        status = std::max(status, row.numerical_failure ? exit_numerical : exit_validation);
    }
    return status;
}

int run_single_command(const Options& opt, const ScenarioConfig& cfg) {
    warn_renormalized(cfg);
    return emit(opt, cfg, {run_single(cfg)});
}

int run_sweep_command(const Options& opt, const ScenarioConfig& cfg) {
    warn_renormalized(cfg);
    if (cfg.axes.empty()) return run_single_command(opt, cfg);
    return emit(opt, cfg, run_sweep(cfg, opt.jobs));
}

int run_validate_command(const Options& opt, const ScenarioConfig& cfg) {
    warn_renormalized(cfg);
    const auto report = rydcp::full_report(materialize(cfg.base));
    with_output(opt, [&](std::ostream& out) { write_report(out, report, parse_format(opt.format)); });
    return 0;
}

ScenarioConfig load_preset(const std::string& name) {
    const auto text = find_preset(name);
    if (!text) throw rydcp::Error(rydcp::ErrorCode::config_error, "unknown preset '" + name + "'");
    return parse_config_text(*text);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Near-field excitation of Rydberg atoms by a moving mirror"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config) cmd->add_option("--config,-c", opt.config, "Scenario JSON")->required();
        cmd->add_option("--output,-o", opt.output, "Output file (default stdout)");
        cmd->add_option("--format,-f", opt.format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--jobs,-j", opt.jobs, "Parallel sweep workers")->check(CLI::PositiveNumber);
    };

    auto* single = app.add_subcommand("single", "Evaluate one scenario");
    add_common(single, true);
    auto* sweep = app.add_subcommand("sweep", "Evaluate every point of the configured sweep axes");
    add_common(sweep, true);
    auto* validate = app.add_subcommand("validate", "Print the validity report of a scenario");
    add_common(validate, true);

    auto* preset = app.add_subcommand("preset", "Built-in scenarios");
    preset->require_subcommand(1);
    auto* preset_list = preset->add_subcommand("list", "List preset names");
    auto* preset_run = preset->add_subcommand("run", "Run a preset (sweeps if it has axes)");
    preset_run->add_option("name", opt.preset, "Preset name")->required();
    add_common(preset_run, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*single) return run_single_command(opt, parse_config(opt.config));
        if (*sweep) return run_sweep_command(opt, parse_config(opt.config));
        if (*validate) return run_validate_command(opt, parse_config(opt.config));
        if (*preset_list) {
            for (const auto& p : presets()) std::cout << p.name << '\n';
            return 0;
        }
        if (*preset_run) return run_sweep_command(opt, load_preset(opt.preset));
    } catch (const rydcp::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.is_numerical() ? exit_numerical : exit_validation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_validation;
    }
    return 0;
}
