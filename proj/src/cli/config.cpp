#include "rydcp/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "rydcp/atom.hpp"
#include "rydcp/errors.hpp"
#include "rydcp/quantities.hpp"

namespace rydcp::cli {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw Error(ErrorCode::config_error, path + ": " + message);
}

std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

void allow_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> keys) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            fail(join(path, key), "unknown key");
    }
}

const json& require(const json& obj, std::string_view key, const std::string& path) {
    const auto it = obj.find(std::string(key));
    if (it == obj.end()) fail(join(path, key), "missing required key");
    return *it;
}

const char* dimension_name(Dimension d) {
    switch (d) {
    case Dimension::length: return "a length";
    case Dimension::time: return "a time";
    case Dimension::frequency: return "a frequency";
    case Dimension::energy: return "an energy";
    case Dimension::charge: return "a charge";
    case Dimension::dipole_squared: return "a squared dipole";
    case Dimension::dimensionless: return "a plain number";
    }
    return "a quantity";
}

double read_quantity(const json& j, const std::string& path, Dimension dim) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_string()) fail(path, std::string("expected ") + dimension_name(dim));
    Quantity q{};
    try {
        q = parse_quantity(j.get<std::string>());
    } catch (const Error& e) {
        fail(path, e.what());
    }
    if (q.unit == Unit::dimensionless) return q.value;
    if (dimension_of(q.unit) != dim)
        fail(path, "'" + j.get<std::string>() + "' is not " + dimension_name(dim));
    return to_cgs(q);
}

int read_int(const json& j, const std::string& path) {
    if (j.is_number_integer()) return j.get<int>();
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (v == std::floor(v) && std::abs(v) < 1e9) return static_cast<int>(v);
    }
    fail(path, "expected an integer");
}

enum class AxisKind { integer, length, time, frequency, plain };

struct AxisInfo {
    std::string_view name;
    AxisKind kind;
};

const std::vector<AxisInfo>& axis_table() {
    static const std::vector<AxisInfo> table{
        {"time", AxisKind::time},        {"n", AxisKind::integer},
        {"n_prime", AxisKind::integer},  {"z0", AxisKind::length},
        {"amplitude", AxisKind::length}, {"omega", AxisKind::frequency},
        {"phase", AxisKind::plain},      {"duty", AxisKind::plain},
        {"z_center", AxisKind::length},  {"half_width", AxisKind::length},
        {"sigma_z", AxisKind::length},   {"n_atoms", AxisKind::plain},
        {"nearest_neighbor", AxisKind::length},
    };
    return table;
}

double read_axis_value(const json& j, AxisKind kind, const std::string& path) {
    switch (kind) {
    case AxisKind::integer: return static_cast<double>(read_int(j, path));
    case AxisKind::length: return read_quantity(j, path, Dimension::length);
    case AxisKind::time: return read_quantity(j, path, Dimension::time);
    case AxisKind::frequency: return read_quantity(j, path, Dimension::frequency);
    case AxisKind::plain: return read_quantity(j, path, Dimension::dimensionless);
    }
    return 0.0;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& file) {
    std::filesystem::path p(file);
    if (p.is_relative() && !base.empty()) p = base / p;
    return p;
}

Method read_method(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a method name");
    const auto name = j.get<std::string>();
    if (name == "time_domain") return Method::time_domain;
    if (name == "resonant" || name == "rwa") return Method::resonant_rwa;
    if (name == "scaling") return Method::scaling_law;
    if (name == "spectral") return Method::spectral;
    fail(path, "unknown method '" + name + "' (time_domain, resonant, scaling, spectral)");
}

std::optional<double> read_drive(const json& obj, std::string_view key, const std::string& path) {
    const auto it = obj.find(std::string(key));
    if (it == obj.end()) return std::nullopt;
    if (it->is_string() && it->get<std::string>() == "resonant") return std::nullopt;
    return read_quantity(*it, join(path, key), Dimension::frequency);
}

ShapeSpec read_shape(const json& j, const std::string& path, const std::filesystem::path& base) {
    ShapeSpec spec;
    if (!j.is_object()) fail(path, "expected an object");
    const auto type = require(j, "type", path);
    if (!type.is_string()) fail(join(path, "type"), "expected a string");
    const auto name = type.get<std::string>();
    if (name == "harmonic") {
        allow_keys(j, path, {"type", "omega", "phase"});
        spec.kind = ShapeSpec::Kind::harmonic;
        spec.omega = read_drive(j, "omega", path);
        if (j.contains("phase"))
            spec.phase = read_quantity(j["phase"], join(path, "phase"), Dimension::dimensionless);
    } else if (name == "square_train") {
        allow_keys(j, path, {"type", "rep_rate", "duty"});
        spec.kind = ShapeSpec::Kind::square_train;
        spec.omega = read_drive(j, "rep_rate", path);
        if (j.contains("duty"))
            spec.duty = read_quantity(j["duty"], join(path, "duty"), Dimension::dimensionless);
    } else if (name == "tabulated") {
        allow_keys(j, path, {"type", "file", "times", "values"});
        spec.kind = ShapeSpec::Kind::tabulated;
        try {
            if (j.contains("file")) {
                spec.table = load_tabulated_shape(resolve(base, j["file"].get<std::string>()));
            } else {
                const auto& times = require(j, "times", path);
                const auto& values = require(j, "values", path);
                std::vector<double> ts;
                std::vector<double> vs;
                for (std::size_t i = 0; i < times.size(); ++i)
                    ts.push_back(read_quantity(times[i], join(path, "times") + "[" + std::to_string(i) + "]",
                                               Dimension::time));
                for (const auto& v : values) vs.push_back(v.get<double>());
                spec.table = TabulatedShape(std::move(ts), std::move(vs));
            }
        } catch (const Error& e) {
            if (e.code() == ErrorCode::config_error) throw;
            fail(path, e.what());
        } catch (const json::exception& e) {
            fail(path, e.what());
        }
    } else {
        fail(join(path, "type"), "unknown shape '" + name + "' (harmonic, square_train, tabulated)");
    }
    return spec;
}

GasSpec read_gas(const json& j, const std::string& path, const std::filesystem::path& base) {
    allow_keys(j, path, {"n_atoms", "transverse_extent", "profile"});
    GasSpec gas;
    if (j.contains("n_atoms"))
        gas.n_atoms = read_quantity(j["n_atoms"], join(path, "n_atoms"), Dimension::dimensionless);
    gas.transverse_extent =
        read_quantity(require(j, "transverse_extent", path), join(path, "transverse_extent"),
                      Dimension::length);

    const std::string ppath = join(path, "profile");
    const auto& prof = require(j, "profile", path);
    if (!prof.is_object()) fail(ppath, "expected an object");
    const auto& type = require(prof, "type", ppath);
    const auto name = type.is_string() ? type.get<std::string>() : std::string();
    if (name == "parabolic") {
        allow_keys(prof, ppath, {"type", "z_center", "half_width"});
        gas.profile.kind = ProfileSpec::Kind::parabolic;
        gas.profile.z_center = read_quantity(require(prof, "z_center", ppath),
                                             join(ppath, "z_center"), Dimension::length);
        gas.profile.width = read_quantity(require(prof, "half_width", ppath),
                                          join(ppath, "half_width"), Dimension::length);
    } else if (name == "gaussian") {
        allow_keys(prof, ppath, {"type", "z_center", "sigma_z"});
        gas.profile.kind = ProfileSpec::Kind::gaussian;
        gas.profile.z_center = read_quantity(require(prof, "z_center", ppath),
                                             join(ppath, "z_center"), Dimension::length);
        gas.profile.width = read_quantity(require(prof, "sigma_z", ppath), join(ppath, "sigma_z"),
                                          Dimension::length);
    } else if (name == "tabulated") {
        allow_keys(prof, ppath, {"type", "file"});
        gas.profile.kind = ProfileSpec::Kind::tabulated;
        try {
            gas.profile.table = load_tabulated_density(
                resolve(base, require(prof, "file", ppath).get<std::string>()));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::config_error) throw;
            fail(join(ppath, "file"), e.what());
        }
    } else {
        fail(join(ppath, "type"), "unknown profile (parabolic, gaussian, tabulated)");
    }
    if (!gas.n_atoms && gas.profile.kind != ProfileSpec::Kind::tabulated)
        fail(join(path, "n_atoms"), "missing required key");
    return gas;
}

std::vector<double> read_axis_values(const json& axis, AxisKind kind, const std::string& path) {
    std::vector<double> values;
    if (axis.contains("values")) {
        const auto& list = axis["values"];
        if (!list.is_array()) fail(join(path, "values"), "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i)
            values.push_back(
                read_axis_value(list[i], kind, join(path, "values") + "[" + std::to_string(i) + "]"));
        return values;
    }
    const std::string rpath = join(path, "range");
    const auto& range = require(axis, "range", path);
    allow_keys(range, rpath, {"start", "stop", "count", "scale"});
    const double start = read_axis_value(require(range, "start", rpath), kind, join(rpath, "start"));
    const double stop = read_axis_value(require(range, "stop", rpath), kind, join(rpath, "stop"));
    const int count = read_int(require(range, "count", rpath), join(rpath, "count"));
    if (count < 0) fail(join(rpath, "count"), "must be >= 0");
    const bool log_scale = range.value("scale", std::string("linear")) == "log";
    if (log_scale && !(start > 0.0 && stop > 0.0)) fail(rpath, "log range needs positive ends");
    for (int i = 0; i < count; ++i) {
        const double u = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        double v = log_scale ? std::exp(std::log(start) + u * (std::log(stop) - std::log(start)))
                             : start + u * (stop - start);
        if (i == count - 1 && count > 1) v = stop;
        if (kind == AxisKind::integer) v = std::round(v);
        values.push_back(v);
    }
    return values;
}

template <typename F>
auto at_key(const std::string& path, F&& build) {
    try {
        return build();
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
}

} // namespace

const std::vector<std::string_view>& sweep_parameters() {
    static const std::vector<std::string_view> names = [] {
        std::vector<std::string_view> out;
        for (const auto& a : axis_table()) out.push_back(a.name);
        return out;
    }();
    return names;
}

ScenarioConfig parse_config_text(std::string_view text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::parse_error, std::string("config is not valid JSON: ") + e.what());
    }
    allow_keys(root, "", {"transition", "mirror", "gas", "time", "method", "spectral_samples",
                          "photon", "nearest_neighbor", "time_domain", "sweep", "outputs",
                          "description"});

    ScenarioConfig cfg;
    Parameters& p = cfg.base;

    try {
        const auto& tr = require(root, "transition", "");
        allow_keys(tr, "transition", {"n", "n_prime"});
        p.n = read_int(require(tr, "n", "transition"), "transition.n");
        p.n_prime = read_int(require(tr, "n_prime", "transition"), "transition.n_prime");

        const auto& mirror = require(root, "mirror", "");
        allow_keys(mirror, "mirror", {"z0", "amplitude", "shape"});
        if (mirror.contains("z0"))
            p.z0 = read_quantity(mirror["z0"], "mirror.z0", Dimension::length);
        p.amplitude = read_quantity(require(mirror, "amplitude", "mirror"), "mirror.amplitude",
                                    Dimension::length);
        if (mirror.contains("shape")) p.shape = read_shape(mirror["shape"], "mirror.shape", base_dir);

        if (root.contains("gas")) p.gas = read_gas(root["gas"], "gas", base_dir);

        const auto& time = require(root, "time", "");
        if (time.is_array()) {
            SweepAxis axis{"time", {}};
            for (std::size_t i = 0; i < time.size(); ++i)
                axis.values.push_back(
                    read_quantity(time[i], "time[" + std::to_string(i) + "]", Dimension::time));
            p.time = axis.values.empty() ? 0.0 : axis.values.front();
            cfg.axes.push_back(std::move(axis));
        } else {
            p.time = read_quantity(time, "time", Dimension::time);
        }

        if (root.contains("method")) p.method = read_method(root["method"], "method");
        if (root.contains("spectral_samples"))
            p.spectral_samples = read_int(root["spectral_samples"], "spectral_samples");

        if (root.contains("time_domain")) {
            const auto& td = root["time_domain"];
            allow_keys(td, "time_domain", {"coupling", "rel_tol", "max_intervals"});
            if (td.contains("coupling")) {
                const auto model = td["coupling"].is_string() ? td["coupling"].get<std::string>() : "";
                if (model == "linearized") p.time_domain.coupling = CouplingModel::linearized;
                else if (model == "exact") p.time_domain.coupling = CouplingModel::exact;
                else fail("time_domain.coupling", "expected 'linearized' or 'exact'");
            }
            if (td.contains("rel_tol")) {
                p.time_domain.quadrature.rel_tol =
                    read_quantity(td["rel_tol"], "time_domain.rel_tol", Dimension::dimensionless);
                if (!(p.time_domain.quadrature.rel_tol > 0.0)) fail("time_domain.rel_tol", "must be positive");
            }
            if (td.contains("max_intervals")) {
                const int cap = read_int(td["max_intervals"], "time_domain.max_intervals");
                if (cap < 1) fail("time_domain.max_intervals", "must be >= 1");
                p.time_domain.quadrature.max_intervals = static_cast<std::size_t>(cap);
            }
        }
        if (root.contains("photon")) {
            const auto& ph = root["photon"];
            allow_keys(ph, "photon", {"areal_density", "front_area"});
            p.photon = PhotonInputs{
                read_quantity(require(ph, "areal_density", "photon"), "photon.areal_density",
                              Dimension::dimensionless),
                read_quantity(require(ph, "front_area", "photon"), "photon.front_area",
                              Dimension::dimensionless)};
        }
        if (root.contains("nearest_neighbor"))
            p.nearest_neighbor =
                read_quantity(root["nearest_neighbor"], "nearest_neighbor", Dimension::length);

        if (root.contains("sweep")) {
            const auto& sweep = root["sweep"];
            allow_keys(sweep, "sweep", {"axes", "max_points"});
            if (sweep.contains("max_points")) {
                const int cap = read_int(sweep["max_points"], "sweep.max_points");
                if (cap < 0) fail("sweep.max_points", "must be >= 0");
                cfg.max_points = static_cast<std::size_t>(cap);
            }
            const auto& axes = require(sweep, "axes", "sweep");
            if (!axes.is_array()) fail("sweep.axes", "expected an array");
            for (std::size_t i = 0; i < axes.size(); ++i) {
                const std::string path = "sweep.axes[" + std::to_string(i) + "]";
                allow_keys(axes[i], path, {"parameter", "values", "range"});
                const auto& name_json = require(axes[i], "parameter", path);
                const auto name = name_json.is_string() ? name_json.get<std::string>() : "";
                const auto info = std::find_if(axis_table().begin(), axis_table().end(),
                                               [&](const AxisInfo& a) { return a.name == name; });
                if (info == axis_table().end())
                    fail(join(path, "parameter"), "unknown sweep parameter '" + name + "'");
                for (const auto& existing : cfg.axes)
                    if (existing.parameter == name)
                        fail(join(path, "parameter"), "parameter '" + name + "' swept twice");
                cfg.axes.push_back({name, read_axis_values(axes[i], info->kind, path)});
            }
        }

        if (root.contains("outputs")) {
            const auto& list = root["outputs"];
            if (!list.is_array()) fail("outputs", "expected an array");
            cfg.outputs = Outputs{false, false, false, false, false, false, false};
            for (const auto& item : list) {
                const auto name = item.is_string() ? item.get<std::string>() : "";
                if (name == "probability") cfg.outputs.probability = true;
                else if (name == "amplitude") cfg.outputs.amplitude = true;
                else if (name == "excited_count") cfg.outputs.excited_count = true;
                else if (name == "excited_count_closed_form") cfg.outputs.excited_count_closed_form = true;
                else if (name == "validity") cfg.outputs.validity = true;
                else if (name == "photon") cfg.outputs.photon = true;
                else if (name == "hierarchy") cfg.outputs.hierarchy = true;
                else fail("outputs", "unknown output '" + name + "'");
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::config_error, std::string("config: ") + e.what());
    }

    // Fail fast on the base point; individual sweep points are checked per row.
    static_cast<void>(materialize(p));
    return cfg;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), path.parent_path());
}

void apply_axis(Parameters& p, std::string_view parameter, double value) {
    auto need_gas = [&]() -> GasSpec& {
        if (!p.gas) fail(std::string(parameter), "sweep needs a gas section");
        return *p.gas;
    };
    if (parameter == "time") {
        p.time = value;
    } else if (parameter == "n") {
        const int gap = p.n_prime - p.n;
        p.n = static_cast<int>(std::lround(value));
        p.n_prime = p.n + gap;
    } else if (parameter == "n_prime") {
        p.n_prime = static_cast<int>(std::lround(value));
    } else if (parameter == "z0") {
        p.z0 = value;
    } else if (parameter == "amplitude") {
        p.amplitude = value;
    } else if (parameter == "omega") {
        p.shape.omega = value;
    } else if (parameter == "phase") {
        p.shape.phase = value;
    } else if (parameter == "duty") {
        p.shape.duty = value;
    } else if (parameter == "z_center") {
        need_gas().profile.z_center = value;
    } else if (parameter == "half_width" || parameter == "sigma_z") {
        need_gas().profile.width = value;
    } else if (parameter == "n_atoms") {
        need_gas().n_atoms = value;
    } else if (parameter == "nearest_neighbor") {
        p.nearest_neighbor = value;
    } else {
        fail(std::string(parameter), "unknown sweep parameter");
    }
}

Scenario materialize(const Parameters& p) {
    const auto transition = at_key("transition", [&] { return make_transition(p.n, p.n_prime); });

    const MotionShape shape = at_key("mirror.shape", [&]() -> MotionShape {
        const double drive = p.shape.omega.value_or(transition.omega0);
        switch (p.shape.kind) {
        case ShapeSpec::Kind::harmonic: return Harmonic{drive, p.shape.phase};
        case ShapeSpec::Kind::square_train: return SquareTrain{drive, p.shape.duty};
        case ShapeSpec::Kind::tabulated: return *p.shape.table;
        }
        throw Error(ErrorCode::invalid_argument, "unknown shape");
    });

    std::optional<GasProfile> gas;
    if (p.gas) {
        gas = at_key("gas.profile", [&] {
            ProfileShape profile;
            double n_atoms = p.gas->n_atoms.value_or(0.0);
            switch (p.gas->profile.kind) {
            case ProfileSpec::Kind::parabolic:
                profile = Parabolic{p.gas->profile.z_center, p.gas->profile.width};
                break;
            case ProfileSpec::Kind::gaussian:
                profile = Gaussian{p.gas->profile.z_center, p.gas->profile.width};
                break;
            case ProfileSpec::Kind::tabulated:
                profile = *p.gas->profile.table;
                if (!p.gas->n_atoms) n_atoms = tabulated_integral(*p.gas->profile.table);
                break;
            }
            return GasProfile(n_atoms, std::move(profile), p.gas->transverse_extent);
        });
    }

    double z0 = 0.0;
    if (p.z0) {
        z0 = *p.z0;
    } else if (gas) {
        z0 = gas->centre();
    } else {
        fail("mirror.z0", "required when no gas is configured");
    }

    if (!(p.time >= 0.0) || !std::isfinite(p.time)) fail("time", "must be >= 0");

    std::optional<MirrorMotion> mirror;
    try {
        mirror.emplace(z0, p.amplitude, shape);
    } catch (const Error& e) {
        const bool about_z0 = e.code() == ErrorCode::nonpositive_distance;
        const bool about_a = e.code() == ErrorCode::amplitude_exceeds_distance ||
                             (e.code() == ErrorCode::invalid_argument && p.amplitude < 0.0);
        const std::string key = about_z0 ? "mirror.z0" : about_a ? "mirror.amplitude" : "mirror.shape";
        throw Error(e.code(), key + ": " + e.what());
    }

    if (const auto* table = std::get_if<TabulatedShape>(&shape)) {
        if (table->front() > 0.0 || table->back() < p.time)
            fail("mirror.shape", "table does not cover [0, time]");
    }

    if (gas) {
        const auto [lo, hi] = gas->support();
        if (!(lo > p.amplitude)) {
            std::ostringstream msg;
            msg << "support starts at " << lo << " cm, inside the mirror excursion "
                << p.amplitude << " cm";
            throw Error(ErrorCode::support_touches_wall, "gas.profile: " + msg.str());
        }
    }

    if (p.photon && (!(p.photon->areal_density >= 0.0) || !(p.photon->front_area >= 0.0)))
        fail("photon", "densities and areas must be >= 0");
    if (p.nearest_neighbor && !(*p.nearest_neighbor > 0.0))
        fail("nearest_neighbor", "must be positive");
    if (p.spectral_samples < 0) fail("spectral_samples", "must be >= 0");

    Scenario s{transition, std::move(*mirror), p.time, p.method, std::move(gas), p.photon,
               p.nearest_neighbor, p.spectral_samples, p.time_domain};
    return s;
}

} // namespace rydcp::cli
