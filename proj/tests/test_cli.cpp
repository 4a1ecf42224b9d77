#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpent/cli/config.hpp"
#include "cpent/cli/output.hpp"
#include "cpent/cli/presets.hpp"
#include "cpent/cli/run.hpp"

using namespace cpent;
using namespace cpent::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> result;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) result.push_back(line);
    return result;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("cpent_cli_" + std::to_string(std::rand()) + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("help and version exit cleanly") {
    const auto help = invoke({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("decay-map") != std::string::npos);
    const auto version = invoke({"--version"});
    CHECK(version.code == 0);
    CHECK(version.out == std::string(cpent::version()) + "\n");
}

TEST_CASE("configuration errors exit with 1") {
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"coeffs", "--surface", "silver"}).code == 1);
    CHECK(invoke({"coeffs", "--z", "-1"}).code == 1);
    CHECK(invoke({"coeffs", "--config", "yy"}).code == 1);
    CHECK(invoke({"coeffs", "--format", "xml"}).code == 1);
    CHECK(invoke({"coeffs", "--bogus"}).code == 1);
    CHECK(invoke({"reproduce", "fig9"}).code == 1);
    CHECK(invoke({"coeffs", "--config-file", "/nonexistent/cfg.json"}).code == 1);
    const auto bad = invoke({"trace", "--samples", "1"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("samples") != std::string::npos);
}

TEST_CASE("numerical failures exit with 2") {
    const auto r = invoke({"coeffs", "--surface", "perfect", "--max-subdivisions", "1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("numerical failure") != std::string::npos);
}

TEST_CASE("coeffs prints the coupling table") {
    const auto r = invoke({"coeffs", "--surface", "free", "--x", "1", "--z", "0.2", "--config", "xx"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "quantity,free,scattering,total");
    CHECK(rows[1].rfind("gamma_self,1,0,1", 0) == 0);
    CHECK(rows[4].rfind("relative_decay,", 0) == 0);

    const auto j = invoke({"coeffs", "--surface", "gold", "--format", "json"});
    REQUIRE(j.code == 0);
    const auto doc = nlohmann::json::parse(j.out);
    const auto set = coupling_set(Geometry{1.0, 0.2}, media::gold());
    CHECK(doc["gamma_pair"]["total"].get<double>() == set.gamma12());
    CHECK(doc["metadata"]["dipoles"] == "xx");
}

TEST_CASE("trace output layout and full precision") {
    const auto r = invoke({"trace", "--surface", "perfect", "--x", "1", "--z", "0.2", "--tmax", "30", "--samples", "7"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0] == "t_gamma0,concurrence,rho22,rho33,rho44,re_rho23,im_rho23");
    CHECK(rows[1].rfind("0,0,1,0,0,0,0", 0) == 0);
    const auto trace = concurrence_trace(Geometry{1.0, 0.2}, media::PerfectConductor{}, 30.0, 7);
    const std::string c_last = rows.back().substr(rows.back().find(',') + 1);
    CHECK(std::stod(c_last.substr(0, c_last.find(','))) == trace.concurrence.back());
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.0726629, 1e-300, 6.02214076e23, 0.0}) CHECK(std::stod(format_double(v)) == v);
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(-0.0) == "0");
}

TEST_CASE("decay-map CSV and JSON schemas") {
    const std::vector<std::string> base{"decay-map", "--surface", "gold",   "--x-min", "0.5", "--x-max", "1",
                                        "--x-count", "2",         "--z-min", "0.2",    "--z-max", "0.3", "--z-count",
                                        "3"};
    const auto csv = invoke(base);
    REQUIRE(csv.code == 0);
    const auto rows = lines(csv.out);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == "x_scaled,z_scaled,relative_decay");
    CHECK(rows[1].rfind("0.5,0.20000000000000001,", 0) == 0);
    CHECK(rows[4].rfind("1,0.20000000000000001,", 0) == 0);

    auto args = base;
    args.insert(args.end(), {"--format", "json", "--observable", "concurrence_at:10"});
    const auto json = invoke(args);
    REQUIRE(json.code == 0);
    const auto doc = nlohmann::json::parse(json.out);
    CHECK(doc["x_scaled"].size() == 2);
    CHECK(doc["z_scaled"].size() == 3);
    CHECK(doc["values"][1].size() == 3);
    CHECK(doc["metadata"]["observable"] == "concurrence_at:10");
    CHECK(doc["metadata"].contains("timestamp"));
    CHECK(doc["metadata"].contains("quadrature"));
}

TEST_CASE("optimal-z reports the minimizer") {
    const auto r = invoke({"optimal-z", "--surface", "gold", "--x", "1", "--z-min", "0.1", "--z-max", "1.5"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "x_scaled,z_star,relative_decay,at_boundary,t_gamma0,concurrence");
    const double z = std::stod(rows[1].substr(2));
    CHECK(z == doctest::Approx(0.40).epsilon(0.05));
}

TEST_CASE("config files round-trip and reject unknown keys") {
    RunConfig c;
    c.command = "trace";
    c.surface.kind = "niobium";
    c.surface.reduced_temperature = 0.1;
    c.geometry.dipoles = "0.3";
    c.sweep.observable = "gamma_pair";
    c.quadrature.max_subdivisions = 500;
    CHECK(parse_run_config(serialize(c)) == c);

    CHECK_THROWS_AS(parse_run_config(R"({"geometry": {"x": 1, "height": 2}})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"colour": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"geometry": {"x": "one"}})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"trace": {"samples": 2.5}})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("{"), ConfigError);

    TempDir dir;
    const fs::path file = dir.path / "cfg.json";
    std::ofstream(file) << R"({"surface": {"kind": "gold"}, "geometry": {"x": 0.7, "z": 0.3}})";
    const auto printed = invoke({"coeffs", "--config-file", file.string(), "--z", "0.25", "--print-config"});
    REQUIRE(printed.code == 0);
    const RunConfig effective = parse_run_config(printed.out);
    CHECK(effective.surface.kind == "gold");
    CHECK(effective.geometry.x == 0.7);
    CHECK(effective.geometry.z == 0.25);
    CHECK(effective.command == "coeffs");
}

TEST_CASE("thread count from the environment") {
    ::setenv("CP_ENTANGLE_THREADS", "3", 1);
    CHECK(thread_count() == 3u);
    ::setenv("CP_ENTANGLE_THREADS", "zero", 1);
    CHECK_THROWS_AS(thread_count(), ConfigError);
    CHECK(invoke({"decay-map", "--x-count", "2", "--z-count", "2"}).code == 1);
    ::unsetenv("CP_ENTANGLE_THREADS");
    CHECK(thread_count() >= 1u);
}

TEST_CASE("file output is written atomically to the requested path") {
    TempDir dir;
    const fs::path file = dir.path / "coeffs.csv";
    const auto r = invoke({"coeffs", "-o", file.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(file).rfind("quantity,free,scattering,total\n", 0) == 0);
    for (const auto& entry : fs::directory_iterator(dir.path)) CHECK(entry.path() == file);
}

TEST_CASE("reproduce names one file per panel") {
    TempDir dir;
    const auto one = invoke({"reproduce", "sm-fig4", "-o", (dir.path / "traces.csv").string()});
    REQUIRE(one.code == 0);
    CHECK(fs::exists(dir.path / "traces.csv"));
    CHECK(lines(slurp(dir.path / "traces.csv"))[0] == "t_gamma0,c_z0.2,c_z0.4,c_z1");

    const auto two = invoke({"reproduce", "sm-fig1", "-o", (dir.path / "pc.csv").string()});
    REQUIRE(two.code == 0);
    CHECK(fs::exists(dir.path / "pc_gamma.csv"));
    CHECK(fs::exists(dir.path / "pc_decay.csv"));
    CHECK(lines(two.out).size() == 2);
    CHECK(lines(slurp(dir.path / "pc_gamma.csv"))[0] == "z_scaled,gamma_zz,gamma_xx");
}

TEST_CASE("preset registry") {
    CHECK(preset_ids().size() == 8);
    const auto panels = reproduce("fig3c");
    REQUIRE(panels.size() == 1);
    const auto& table = std::get<Table>(panels[0].data);
    CHECK(table.columns.size() == 5);
    CHECK(table.rows() == 301);
    CHECK_THROWS_AS(reproduce("fig1"), ConfigError);
}
