#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rydcp/cli/config.hpp"
#include "rydcp/cli/presets.hpp"
#include "rydcp/cli/runner.hpp"
#include "rydcp/errors.hpp"
#include "support.hpp"

using namespace rydcp;
using namespace rydcp::cli;
using rydcp::test::rel_diff;

namespace {

ScenarioConfig preset(std::string_view name) {
    const auto text = find_preset(name);
    REQUIRE(text.has_value());
    return parse_config_text(*text);
}

std::string config_error(std::string_view text) {
    try {
        static_cast<void>(parse_config_text(text));
    } catch (const Error& e) {
        return e.what();
    }
    FAIL("expected a configuration error");
    return {};
}

/// Scratch directory for CLI runs, removed on scope exit.
struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("rydcp-test-" + std::to_string(std::hash<std::string>{}(
                                    std::to_string(reinterpret_cast<std::uintptr_t>(this)))));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::filesystem::path write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name) << text;
        return path / name;
    }
};

int run_cli(const std::string& args) {
    const int status = std::system((std::string(RYDCP_CLI_PATH) + " " + args + " 2>/dev/null").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

double column(const ResultRow& row, std::string_view name) {
    for (const auto& [key, value] : row.inputs)
        if (key == name) return value;
    FAIL("missing column");
    return 0.0;
}

const char* single_atom_json = R"({
  "transition": {"n": 75, "n_prime": 77},
  "mirror": {"z0": "20 um", "amplitude": "2 um", "shape": {"type": "harmonic", "omega": "resonant"}},
  "time": "2 us",
  "method": "resonant"
})";

} // namespace

TEST_SUITE("cli") {

TEST_CASE("all documented presets ship") {
    for (const char* name : {"paper_single_atom", "paper_gas", "paper_photon_comparison", "square_train_demo"}) {
        CHECK(find_preset(name).has_value());
        CHECK_NOTHROW(static_cast<void>(preset(name)));
    }
    CHECK_FALSE(find_preset("nope").has_value());
    CHECK(presets().size() == 4);
}

TEST_CASE("paper_single_atom loads in cgs") {
    const auto cfg = preset("paper_single_atom");
    CHECK(cfg.base.n == 75);
    CHECK(cfg.base.n_prime == 77);
    CHECK(rel_diff(*cfg.base.z0, 2e-3) < 1e-15);
    CHECK(rel_diff(cfg.base.amplitude, 2e-4) < 1e-15);
    CHECK(rel_diff(cfg.base.time, 2e-6) < 1e-15);
    CHECK(cfg.axes.empty());
}

TEST_CASE("paper_single_atom evaluates to about 20%") {
    const auto row = run_single(preset("paper_single_atom"));
    REQUIRE(row.probability.has_value());
    CHECK(*row.probability > 0.17);
    CHECK(*row.probability < 0.21);
    REQUIRE(row.validity.has_value());
    CHECK(row.validity->near_zone == Flag::ok);
    CHECK(row.validity->amplitude == Flag::ok);
    CHECK(row.validity->perturbative == Flag::marginal);
}

TEST_CASE("paper_gas evaluates to about 100 atoms") {
    const auto row = run_single(preset("paper_gas"));
    REQUIRE(row.excited_count.has_value());
    CHECK(*row.excited_count >= 90.0);
    CHECK(*row.excited_count <= 110.0);
    CHECK(rel_diff(*row.excited_count, *row.excited_count_closed_form) < 1e-8);
    CHECK(row.validity->perturbative == Flag::invalid);
    CHECK(row.validity->max_probability > 1.0);
}

TEST_CASE("static mirror gives zero probabilities") {
    auto cfg = preset("paper_gas");
    cfg.base.amplitude = 0.0;
    const auto row = run_single(cfg);
    CHECK(*row.probability == 0.0);
    CHECK(*row.excited_count == 0.0);
    CHECK(row.validity->overall == Flag::ok);
}

TEST_CASE("amplitude at or beyond z0 names mirror.amplitude") {
    const std::string msg = config_error(R"({"transition": {"n": 75, "n_prime": 77},
        "mirror": {"z0": "20 um", "amplitude": "25 um"}, "time": "1 us"})");
    CHECK(msg.find("mirror.amplitude") != std::string::npos);
}

TEST_CASE("cloud touching the wall names the gas geometry") {
    const std::string msg = config_error(R"({"transition": {"n": 75, "n_prime": 77},
        "mirror": {"amplitude": "2 um"},
        "gas": {"n_atoms": 1000, "transverse_extent": "500 um",
                "profile": {"type": "parabolic", "z_center": "10 um", "half_width": "10 um"}},
        "time": "1 us", "method": "scaling"})");
    CHECK(msg.find("gas.profile") != std::string::npos);
    CHECK(msg.find("half_width") != std::string::npos);
}

TEST_CASE("schema errors carry the key path") {
    CHECK(config_error(R"({"transition": {"n": 75}, "mirror": {"z0": 1, "amplitude": 0}, "time": 1})")
              .find("transition.n_prime") != std::string::npos);
    CHECK(config_error(R"({"transition": {"n": 75, "n_prime": 77}, "mirror": {"z0": "1 s", "amplitude": 0}, "time": 1})")
              .find("mirror.z0") != std::string::npos);
    CHECK(config_error(R"({"transition": {"n": 77, "n_prime": 75}, "mirror": {"z0": 1, "amplitude": 0}, "time": 1})")
              .find("transition") != std::string::npos);
    CHECK(config_error(R"({"transition": {"n": 75, "n_prime": 77}, "mirror": {"z0": 1, "amplitude": 0}, "time": 1, "colour": 3})")
              .find("colour") != std::string::npos);
    CHECK(config_error(R"({"transition": {"n": 75, "n_prime": 77}, "mirror": {"z0": 1, "amplitude": 0}, "time": 1,
                           "sweep": {"axes": [{"parameter": "colour", "values": [1]}]}})")
              .find("sweep.axes[0].parameter") != std::string::npos);
    try {
        static_cast<void>(parse_config_text("{\"transition\": \n {"));
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::parse_error);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("time sweep recovers the t^2 rate") {
    auto cfg = preset("paper_single_atom");
    std::vector<double> times;
    for (int i = 1; i <= 10; ++i) times.push_back(2e-7 * i);
    cfg.axes.push_back({"time", times});
    const auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 10);
    // least-squares fit of P = r t^2
    double num = 0.0, den = 0.0;
    for (const auto& row : rows) {
        const double t2 = std::pow(column(row, "time"), 2);
        num += *row.probability * t2;
        den += t2 * t2;
    }
    const double r = num / den;
    CHECK(r >= 4.2e10);
    CHECK(r <= 5.2e10);
}

TEST_CASE("n sweep follows n^8 at fixed geometry") {
    auto cfg = preset("paper_gas");
    cfg.base.method = Method::scaling_law;
    cfg.axes.push_back({"n", {30, 50, 75}});
    const auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double ratio = *rows[i].probability / *rows[0].probability;
        const double expect = std::pow(column(rows[i], "n") / 30.0, 8);
        CHECK(rel_diff(ratio, expect) < 1e-10);
        const double ne = *rows[i].excited_count / *rows[0].excited_count;
        CHECK(rel_diff(ne, expect) < 1e-10);
    }
}

TEST_CASE("row count is the product of axis lengths, first axis slowest") {
    auto cfg = preset("paper_single_atom");
    cfg.axes.push_back({"time", {1e-7, 2e-7, 3e-7}});
    cfg.axes.push_back({"amplitude", {1e-4, 2e-4}});
    const auto rows = run_sweep(cfg, 2);
    REQUIRE(rows.size() == 6);
    CHECK(column(rows[0], "time") == 1e-7);
    CHECK(column(rows[1], "time") == 1e-7);
    CHECK(column(rows[1], "amplitude") == 2e-4);
    CHECK(column(rows[2], "time") == 2e-7);
    CHECK(rows[0].inputs[0].first == "time");
    CHECK(rows[0].inputs[1].first == "amplitude");
}

TEST_CASE("empty axis yields a header only") {
    auto cfg = preset("paper_single_atom");
    cfg.axes.push_back({"time", {}});
    const auto rows = run_sweep(cfg);
    CHECK(rows.empty());
    std::ostringstream out;
    write_rows(out, cfg, rows, Format::csv);
    const std::string text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
    CHECK(text.rfind("time,", 0) == 0);
}

TEST_CASE("sweep cap") {
    auto cfg = preset("paper_single_atom");
    cfg.max_points = 5;
    cfg.axes.push_back({"time", {1e-7, 2e-7, 3e-7}});
    cfg.axes.push_back({"amplitude", {1e-4, 2e-4}});
    try {
        static_cast<void>(run_sweep(cfg));
        FAIL("expected cap error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::cap_exceeded);
    }
}

TEST_CASE("per-row errors are recorded and the sweep continues") {
    auto cfg = preset("paper_single_atom");
    cfg.axes.push_back({"amplitude", {1e-4, 3e-3, 2e-4}});
    const auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].error.empty());
    CHECK(rows[1].error.find("mirror.amplitude") != std::string::npos);
    CHECK_FALSE(rows[1].probability.has_value());
    CHECK(rows[2].error.empty());
    std::ostringstream out;
    write_rows(out, cfg, rows, Format::csv);
    CHECK(out.str().find("mirror.amplitude") != std::string::npos);
}

TEST_CASE("output is identical regardless of parallelism") {
    auto cfg = preset("square_train_demo");
    std::vector<double> times;
    for (int i = 1; i <= 12; ++i) times.push_back(1e-9 * i);
    cfg.axes.push_back({"time", times});
    cfg.axes.push_back({"duty", {0.3, 0.5}});
    std::ostringstream serial, parallel, again;
    write_rows(serial, cfg, run_sweep(cfg, 1), Format::csv);
    write_rows(parallel, cfg, run_sweep(cfg, 4), Format::csv);
    write_rows(again, cfg, run_sweep(cfg, 3), Format::json);
    CHECK(serial.str() == parallel.str());
    std::ostringstream again_json;
    write_rows(again_json, cfg, run_sweep(cfg, 1), Format::json);
    CHECK(again.str() == again_json.str());
}

TEST_CASE("CSV layout: axes, inputs, outputs, flags, 17 significant digits") {
    auto cfg = preset("paper_single_atom");
    cfg.axes.push_back({"time", {2e-6}});
    std::ostringstream out;
    write_rows(out, cfg, run_sweep(cfg), Format::csv);
    std::istringstream lines(out.str());
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    const auto names = columns(cfg);
    CHECK(names.front() == "time");
    CHECK(names.back() == "error");
    CHECK(std::find(names.begin(), names.end(), "probability") <
          std::find(names.begin(), names.end(), "overall_flag"));
    const auto first = row.substr(0, row.find(','));
    CHECK(first.size() == std::string("2.0000000000000000e-06").size());
    CHECK(std::stod(first) == 2e-6);
    CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
}

TEST_CASE("rows echo enough inputs to recompute them") {
    auto cfg = preset("paper_single_atom");
    cfg.axes.push_back({"time", {5e-7, 1e-6}});
    for (const auto& row : run_sweep(cfg)) {
        const double p = probability_scaling(static_cast<int>(column(row, "n")), column(row, "z0"),
                                             column(row, "amplitude"), column(row, "time"));
        CHECK(rel_diff(p, *row.probability) < 0.15);
        CHECK(column(row, "omega") > 0.0);
    }
}

TEST_CASE("time lists and ranges become axes") {
    auto cfg = parse_config_text(R"({
      "transition": {"n": 75, "n_prime": 77},
      "mirror": {"z0": "20 um", "amplitude": "2 um"},
      "time": ["1 us", "2 us"],
      "method": "resonant",
      "sweep": {"axes": [{"parameter": "z0", "range": {"start": "10 um", "stop": "40 um", "count": 3, "scale": "log"}}]}
    })");
    REQUIRE(cfg.axes.size() == 2);
    CHECK(cfg.axes[0].parameter == "time");
    CHECK(cfg.axes[0].values.size() == 2);
    CHECK(rel_diff(cfg.axes[1].values[1], 2e-3) < 1e-12);
    CHECK(run_sweep(cfg).size() == 6);
}

TEST_CASE("tabulated inputs resolve relative to the config file") {
    TempDir dir;
    dir.write("density.txt", "# z_cm rho\n1.0e-3 0\n2.0e-3 1.0e6\n3.0e-3 0\n");
    dir.write("shape.txt", "0 0\n1e-8 1\n2e-8 -1\n3e-8 0\n");
    const auto path = dir.write("scenario.json", R"({
      "transition": {"n": 75, "n_prime": 77},
      "mirror": {"amplitude": "2 um", "shape": {"type": "tabulated", "file": "shape.txt"}},
      "gas": {"n_atoms": 1000, "transverse_extent": "500 um", "profile": {"type": "tabulated", "file": "density.txt"}},
      "time": "25 ns",
      "method": "time_domain"
    })");
    const auto cfg = parse_config(path);
    REQUIRE(cfg.base.gas.has_value());
    const auto row = run_single(cfg);
    CHECK(row.error.empty());
    CHECK(*row.excited_count > 0.0);
    CHECK(rel_diff(column(row, "z0"), 2e-3) < 1e-12);
}

TEST_CASE("command line: subcommands, formats and exit codes") {
    TempDir dir;
    const auto good = dir.write("good.json", single_atom_json);
    const auto bad = dir.write("bad.json", R"({"transition": {"n": 75, "n_prime": 77},
        "mirror": {"z0": "20 um", "amplitude": "25 um"}, "time": "1 us"})");
    const auto out = dir.path / "out.csv";
    CHECK(run_cli("single --config " + good.string() + " --output " + out.string()) == 0);
    CHECK(slurp(out).rfind("n,n_prime,z0", 0) == 0);
    CHECK(run_cli("validate --config " + good.string() + " --format json --output " + out.string()) == 0);
    const auto report = nlohmann::json::parse(slurp(out));
    CHECK(report["perturbative_flag"] == "marginal");
    CHECK(run_cli("single --config " + bad.string()) == 1);
    CHECK(run_cli("preset run paper_gas --format json --output " + out.string()) == 0);
    const auto rows = nlohmann::json::parse(slurp(out));
    CHECK(rows.size() == 1);
    CHECK(rows[0]["excited_count"].get<double>() > 90.0);
    CHECK(run_cli("preset run missing") == 1);
    CHECK(run_cli("preset list > " + (dir.path / "list.txt").string()) == 0);
    CHECK(slurp(dir.path / "list.txt").find("square_train_demo") != std::string::npos);
    CHECK(run_cli("sweep --config " + (dir.path / "absent.json").string()) == 1);
}

TEST_CASE("command line: quadrature failures exit with 2") {
    TempDir dir;
    const auto cfg = dir.write("tight.json", R"({
      "transition": {"n": 75, "n_prime": 77},
      "mirror": {"z0": "20 um", "amplitude": "2 um", "shape": {"type": "square_train", "duty": 0.3}},
      "time": "20 ns",
      "method": "time_domain",
      "time_domain": {"max_intervals": 4}
    })");
    CHECK(run_cli("single --config " + cfg.string()) == 2);
    const auto sweep = dir.write("tight_sweep.json", R"({
      "transition": {"n": 75, "n_prime": 77},
      "mirror": {"z0": "20 um", "amplitude": "2 um", "shape": {"type": "square_train", "duty": 0.3}},
      "time": ["20 ns", "0 ns"],
      "method": "time_domain",
      "time_domain": {"max_intervals": 4}
    })");
    const auto out = dir.path / "rows.csv";
    CHECK(run_cli("sweep --config " + sweep.string() + " --output " + out.string()) == 2);
    const std::string text = slurp(out);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

}
