#include "rydcp/cli/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "rydcp/atom.hpp"
#include "rydcp/errors.hpp"
#include "rydcp/gas.hpp"

namespace rydcp::cli {

namespace {

constexpr double missing = std::numeric_limits<double>::quiet_NaN();

bool is_axis(const ScenarioConfig& cfg, std::string_view name) {
    return std::any_of(cfg.axes.begin(), cfg.axes.end(),
                       [&](const SweepAxis& a) { return a.parameter == name; });
}

/// Inputs echoed on every row besides the sweep coordinates.
std::vector<std::string> fixed_inputs(const ScenarioConfig& cfg) {
    const Parameters& p = cfg.base;
    std::vector<std::string> names{"n", "n_prime", "z0", "amplitude", "omega"};
    if (p.shape.kind == ShapeSpec::Kind::harmonic) names.emplace_back("phase");
    if (p.shape.kind == ShapeSpec::Kind::square_train) names.emplace_back("duty");
    names.emplace_back("time");
    if (p.gas) {
        names.emplace_back("n_atoms");
        switch (p.gas->profile.kind) {
        case ProfileSpec::Kind::parabolic:
            names.emplace_back("z_center");
            names.emplace_back("half_width");
            break;
        case ProfileSpec::Kind::gaussian:
            names.emplace_back("z_center");
            names.emplace_back("sigma_z");
            break;
        case ProfileSpec::Kind::tabulated: break;
        }
    }
    if (p.nearest_neighbor) names.emplace_back("nearest_neighbor");
    std::erase_if(names, [&](const std::string& n) { return is_axis(cfg, n); });
    return names;
}

double input_value(const Parameters& p, std::string_view name) {
    if (name == "n") return p.n;
    if (name == "n_prime") return p.n_prime;
    if (name == "z0") {
        if (p.z0) return *p.z0;
        if (!p.gas) return missing;
        if (p.gas->profile.kind != ProfileSpec::Kind::tabulated) return p.gas->profile.z_center;
        // A tabulated profile places the mirror at its density-weighted centre.
        try {
            return materialize(p).mirror.z0();
        } catch (const Error&) {
            return missing;
        }
    }
    if (name == "amplitude") return p.amplitude;
    if (name == "omega") {
        if (p.shape.omega) return *p.shape.omega;
        try {
            return transition_frequency(p.n, p.n_prime);
        } catch (const Error&) {
            return missing;
        }
    }
    if (name == "phase") return p.shape.phase;
    if (name == "duty") return p.shape.duty;
    if (name == "time") return p.time;
    if (name == "n_atoms") {
        if (!p.gas) return missing;
        if (p.gas->n_atoms) return *p.gas->n_atoms;
        return p.gas->profile.table ? tabulated_integral(*p.gas->profile.table) : missing;
    }
    if (name == "z_center") return p.gas ? p.gas->profile.z_center : missing;
    if (name == "half_width" || name == "sigma_z") return p.gas ? p.gas->profile.width : missing;
    if (name == "nearest_neighbor") return p.nearest_neighbor.value_or(missing);
    return missing;
}

std::vector<std::string> output_columns(const Outputs& o) {
    std::vector<std::string> names;
    if (o.probability) names.emplace_back("probability");
    if (o.amplitude) names.emplace_back("amplitude_abs");
    if (o.excited_count) names.emplace_back("excited_count");
    if (o.excited_count_closed_form) names.emplace_back("excited_count_closed_form");
    if (o.validity) {
        for (const char* n : {"max_probability", "max_probability_position", "near_zone_ratio",
                              "amplitude_ratio", "linearization_error"})
            names.emplace_back(n);
    }
    if (o.photon) {
        names.emplace_back("photon_bound");
        names.emplace_back("near_far_contrast");
    }
    if (o.hierarchy) names.emplace_back("hierarchy_ratio");
    return names;
}

std::vector<std::string> flag_columns(const Outputs& o) {
    if (!o.validity) return {};
    return {"near_zone_flag", "amplitude_flag", "perturbative_flag", "overall_flag"};
}

std::optional<double> output_value(const ResultRow& row, std::string_view name) {
    if (name == "probability") return row.probability;
    if (name == "amplitude_abs") return row.amplitude_abs;
    if (name == "excited_count") return row.excited_count;
    if (name == "excited_count_closed_form") return row.excited_count_closed_form;
    if (!row.validity) return std::nullopt;
    const ValidityReport& v = *row.validity;
    if (name == "max_probability") return v.max_probability;
    if (name == "max_probability_position") return v.max_probability_position;
    if (name == "near_zone_ratio") return v.near_zone_ratio;
    if (name == "amplitude_ratio") return v.amplitude_ratio;
    if (name == "linearization_error") return v.linearization_error;
    if (name == "photon_bound") return v.photon_excitation_bound;
    if (name == "near_far_contrast") return v.near_far_contrast;
    if (name == "hierarchy_ratio") return v.hierarchy_ratio;
    return std::nullopt;
}

std::string flag_value(const ResultRow& row, std::string_view name) {
    if (!row.validity) return {};
    const ValidityReport& v = *row.validity;
    if (name == "near_zone_flag") return to_string(v.near_zone);
    if (name == "amplitude_flag") return to_string(v.amplitude);
    if (name == "perturbative_flag") return to_string(v.perturbative);
    if (name == "overall_flag") return to_string(v.overall);
    return {};
}

std::string format_number(double v) {
    if (std::isnan(v)) return {};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

ResultRow evaluate(const ScenarioConfig& cfg, const Parameters& p, ResultRow row) {
    const Scenario s = materialize(p);
    row.method = to_string(s.method);
    const ExcitationResult single = single_atom_excitation(s);
    row.probability = single.probability;
    if (single.amplitude) row.amplitude_abs = std::abs(*single.amplitude);
    if (s.gas) {
        if (cfg.outputs.excited_count)
            row.excited_count = excited_count_quadrature(*s.gas, s.transition.n_initial,
                                                         s.mirror.amplitude(), s.time);
        if (cfg.outputs.excited_count_closed_form && std::holds_alternative<Parabolic>(s.gas->shape()))
            row.excited_count_closed_form = excited_count_closed_form(
                *s.gas, s.transition.n_initial, s.mirror.amplitude(), s.time);
    }
    row.validity = full_report(s, single);
    return row;
}

ResultRow echo_inputs(const ScenarioConfig& cfg, const Parameters& p) {
    ResultRow row;
    for (const auto& axis : cfg.axes)
        row.inputs.emplace_back(axis.parameter, input_value(p, axis.parameter));
    for (const auto& name : fixed_inputs(cfg)) row.inputs.emplace_back(name, input_value(p, name));
    row.method = to_string(p.method);
    return row;
}

} // namespace

ResultRow run_single(const ScenarioConfig& cfg) {
    if (!cfg.axes.empty())
        throw Error(ErrorCode::config_error, "sweep: single evaluation requires a config without sweep axes");
    return evaluate(cfg, cfg.base, echo_inputs(cfg, cfg.base));
}

std::vector<ResultRow> run_sweep(const ScenarioConfig& cfg, unsigned jobs) {
    std::size_t total = 1;
    for (const auto& axis : cfg.axes) {
        if (axis.values.empty()) return {};
        if (total > cfg.max_points / axis.values.size() + 1) {
            total = cfg.max_points + 1;
            break;
        }
        total *= axis.values.size();
    }
    if (total > cfg.max_points)
        throw Error(ErrorCode::cap_exceeded,
                    "sweep: point count exceeds max_points (" + std::to_string(cfg.max_points) + ")");

    std::vector<ResultRow> rows(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            Parameters p = cfg.base;
            std::size_t rem = i;
            std::vector<std::size_t> index(cfg.axes.size());
            for (std::size_t k = cfg.axes.size(); k-- > 0;) {
                index[k] = rem % cfg.axes[k].values.size();
                rem /= cfg.axes[k].values.size();
            }
            ResultRow row;
            try {
                for (std::size_t k = 0; k < cfg.axes.size(); ++k)
                    apply_axis(p, cfg.axes[k].parameter, cfg.axes[k].values[index[k]]);
                row = echo_inputs(cfg, p);
                rows[i] = evaluate(cfg, p, row);
            } catch (const Error& e) {
                if (row.inputs.empty()) row = echo_inputs(cfg, p);
                row.error = e.what();
                row.numerical_failure = e.is_numerical();
                rows[i] = std::move(row);
            } catch (const std::exception& e) {
                if (row.inputs.empty()) row = echo_inputs(cfg, p);
                row.error = e.what();
                rows[i] = std::move(row);
            }
        }
    };

    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), total));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    return rows;
}

std::vector<std::string> columns(const ScenarioConfig& cfg) {
    std::vector<std::string> names;
    for (const auto& axis : cfg.axes) names.push_back(axis.parameter);
    for (auto& n : fixed_inputs(cfg)) names.push_back(std::move(n));
    names.emplace_back("method");
    for (auto& n : output_columns(cfg.outputs)) names.push_back(std::move(n));
    for (auto& n : flag_columns(cfg.outputs)) names.push_back(std::move(n));
    names.emplace_back("error");
    return names;
}

void write_rows(std::ostream& out, const ScenarioConfig& cfg, std::span<const ResultRow> rows,
                Format format) {
    const auto outputs = output_columns(cfg.outputs);
    const auto flags = flag_columns(cfg.outputs);

    if (format == Format::csv) {
        const auto header = columns(cfg);
        for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
        out << '\n';
        for (const auto& row : rows) {
            for (const auto& [name, value] : row.inputs) out << format_number(value) << ',';
            out << row.method;
            for (const auto& name : outputs)
                out << ',' << format_number(output_value(row, name).value_or(missing));
            for (const auto& name : flags) out << ',' << flag_value(row, name);
            out << ',' << csv_escape(row.error) << '\n';
        }
        return;
    }

    using ojson = nlohmann::ordered_json;
    ojson list = ojson::array();
    for (const auto& row : rows) {
        ojson obj = ojson::object();
        for (const auto& [name, value] : row.inputs)
            obj[name] = std::isnan(value) ? ojson(nullptr) : ojson(value);
        obj["method"] = row.method;
        for (const auto& name : outputs) {
            const auto v = output_value(row, name);
            obj[name] = v ? ojson(*v) : ojson(nullptr);
        }
        for (const auto& name : flags) {
            const auto v = flag_value(row, name);
            obj[name] = v.empty() ? ojson(nullptr) : ojson(v);
        }
        obj["error"] = row.error.empty() ? ojson(nullptr) : ojson(row.error);
        list.push_back(std::move(obj));
    }
    out << list.dump(2) << '\n';
}

void write_report(std::ostream& out, const ValidityReport& r, Format format) {
    const std::vector<std::pair<std::string, std::optional<double>>> numbers{
        {"near_zone_ratio", r.near_zone_ratio},
        {"amplitude_ratio", r.amplitude_ratio},
        {"linearization_error", r.linearization_error},
        {"max_probability", r.max_probability},
        {"max_probability_position", r.max_probability_position},
        {"photon_bound", r.photon_excitation_bound},
        {"near_far_contrast", r.near_far_contrast},
        {"hierarchy_ratio", r.hierarchy_ratio},
    };
    const std::vector<std::pair<std::string, Flag>> flags{
        {"near_zone_flag", r.near_zone},
        {"amplitude_flag", r.amplitude},
        {"perturbative_flag", r.perturbative},
        {"overall_flag", r.overall},
    };

    if (format == Format::csv) {
        bool first = true;
        for (const auto& [name, v] : numbers) out << (std::exchange(first, false) ? "" : ",") << name;
        for (const auto& [name, f] : flags) out << ',' << name;
        out << '\n';
        first = true;
        for (const auto& [name, v] : numbers)
            out << (std::exchange(first, false) ? "" : ",") << format_number(v.value_or(missing));
        for (const auto& [name, f] : flags) out << ',' << to_string(f);
        out << '\n';
        return;
    }
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (const auto& [name, v] : numbers)
        obj[name] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    for (const auto& [name, f] : flags) obj[name] = to_string(f);
    out << obj.dump(2) << '\n';
}

} // namespace rydcp::cli
