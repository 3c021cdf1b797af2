#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pai/errors.hpp"
#include "pai/experiments.hpp"

using Catch::Approx;
namespace ex = pai::experiments;
using ex::Json;

namespace {

const std::string& file(const ex::RunOutput& out, const std::string& suffix) {
    for (const auto& f : out.files) {
        if (f.path.size() >= suffix.size() && f.path.compare(f.path.size() - suffix.size(), suffix.size(), suffix) == 0) {
            return f.content;
        }
    }
    FAIL("no output ending in " << suffix);
    throw std::logic_error("unreachable");
}

// Data rows of a CSV with '#' preamble lines and a header.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(cells);
    }
    return rows;
}

Json resolve(const std::string& cmd, std::initializer_list<std::string> sets) {
    Json o = Json::object();
    for (const auto& s : sets) {
        ex::apply_override(o, s);
    }
    return ex::resolve_config(cmd, o);
}

}  // namespace

TEST_CASE("config resolution") {
    for (const auto& cmd : ex::command_names()) {
        CHECK(ex::resolve_config(cmd, Json::object()) == ex::default_config(cmd));
    }
    CHECK_THROWS_AS(ex::resolve_config("trotter", Json{{"nope", 1}}), pai::ConfigError);
    CHECK_THROWS_AS(ex::resolve_config("trotter", Json{{"n_qubits", "eight"}}), pai::ConfigError);
    CHECK_THROWS_AS(ex::resolve_config("trotter", Json{{"n_qubits", 8.5}}), pai::ConfigError);
    CHECK_THROWS_AS(ex::default_config("plot"), pai::ConfigError);
    CHECK(ex::resolve_config("trotter", Json{{"total_time", 2}})["total_time"] == 2);

    Json o = Json::object();
    ex::apply_override(o, "bits=5");
    ex::apply_override(o, "initial_state=zero");
    ex::apply_override(o, "modes=[\"exact\"]");
    CHECK(o["bits"] == 5);
    CHECK(o["initial_state"] == "zero");
    CHECK(o["modes"].size() == 1);
    CHECK_THROWS_AS(ex::apply_override(o, "bits"), pai::ConfigError);
}

TEST_CASE("decompose prints the coefficients") {
    const auto out = ex::run("decompose", resolve("decompose", {"angle=0.1", "bits=7"}), 1);
    CHECK(out.files.empty());
    const Json j = Json::parse(out.console);
    CHECK(j["version"] == ex::version());
    CHECK(j["config"]["bits"] == 7);
    CHECK(j["gamma_sum"].get<double>() == Approx(1.0).epsilon(1e-12));
    CHECK(j["residual"].get<double>() < 1e-12);

    const double delta = 2 * std::numbers::pi / 128;
    const Json on = Json::parse(
        ex::run("decompose", ex::resolve_config("decompose", Json{{"angle", 5 * delta}, {"bits", 7}}), 1).console);
    CHECK(on["gammas"] == Json::array({1.0, 0.0, 0.0}));
}

TEST_CASE("decompose with a grid file") {
    const auto dir = std::filesystem::temp_directory_path() / "pai_test_experiments";
    std::filesystem::create_directories(dir);
    const auto good = (dir / "grid.json").string();
    std::ofstream(good) << "[0.0, 0.5, 1.2, 2.0, 3.0, 4.0, 5.0, 6.0]";
    const Json j = Json::parse(ex::run("decompose", resolve("decompose", {"angle=0.9", "grid_file=" + good}), 1).console);
    CHECK(j["grid"]["kind"] == "explicit");
    CHECK(j["residual"].get<double>() < 1e-10);
    CHECK(j["position"]["k"] == 1);

    const auto bad = (dir / "bad.json").string();
    std::ofstream(bad) << "[0.0, 2.0, 4.0]";
    CHECK_THROWS_AS(ex::run("decompose", resolve("decompose", {"grid_file=" + bad}), 1), pai::ConfigError);
    const auto garbage = (dir / "garbage.json").string();
    std::ofstream(garbage) << "{not json";
    CHECK_THROWS_AS(ex::run("decompose", resolve("decompose", {"grid_file=" + garbage}), 1), pai::ConfigError);
    CHECK_THROWS_AS(ex::run("decompose", resolve("decompose", {"grid_file=" + (dir / "missing").string()}), 1),
                    pai::ConfigError);
}

TEST_CASE("overhead table") {
    const auto out = ex::run("overhead", ex::default_config("overhead"), 1);
    const std::string& csv = file(out, "overhead.csv");
    CHECK(csv.rfind("# pai " + ex::version() + "\n# config {", 0) == 0);
    std::map<std::pair<int, long long>, double> table;
    for (const auto& r : csv_rows(csv)) {
        table[{std::stoi(r[0]), std::stoll(r[1])}] = std::stod(r[3]);
    }
    CHECK(table.at({7, 4096}) == Approx(std::exp(std::pow(std::numbers::pi, 2) / 4)).epsilon(0.03));
    CHECK(table.at({7, 0}) == 1.0);
    CHECK(table.count({12, 4194304}) == 1);

    const auto doubled = ex::run("overhead", resolve("overhead", {"nu_values=[1024, 2048]", "include_max_gates=false"}), 1);
    std::map<long long, double> b9;
    for (const auto& r : csv_rows(file(doubled, "overhead.csv"))) {
        if (r[0] == "9") {
            b9[std::stoll(r[1])] = std::stod(r[3]);
        }
    }
    REQUIRE(b9.size() == 2);
    CHECK(b9.at(2048) == Approx(b9.at(1024) * b9.at(1024)).epsilon(1e-12));
}

TEST_CASE("trotter run on a small ring") {
    const Json cfg = resolve("trotter", {"n_qubits=4", "layers=4", "bits=4", "variants=400", "shots_per_variant=5",
                                         "batch_size=200", "n_batches=200"});
    const auto out = ex::run("trotter", cfg, 1);
    const Json s = Json::parse(file(out, "_summary.json"));
    CHECK(s["config"] == cfg);
    CHECK(s["nu"] == 64);
    const double cont = s["exact"]["continuous"];
    const double near = s["exact"]["nearest"];
    const auto& est = s["estimators"];
    const double near_mean = est["nearest"]["estimate"]["mean"];
    const double near_se = est["nearest"]["estimate"]["std_error"];
    // The sampled nearest-notch bias follows the rounded circuit's exact bias.
    if (std::abs(near - cont) > 10 * near_se) {
        CHECK((near_mean - cont) * (near - cont) > 0);
    }
    CHECK(csv_rows(file(out, "_shots.csv")).size() == 400);
    CHECK(ex::run("trotter", cfg, 3).files[1].content == out.files[1].content);
    CHECK(ex::run("trotter", cfg, 3).files[0].content == out.files[0].content);
}

TEST_CASE("trotter with on-notch angles makes the estimators agree") {
    const Json cfg = resolve("trotter", {"n_qubits=4", "layers=2", "total_time=0", "bits=4", "variants=2000",
                                         "shots_per_variant=1", "batch_size=100", "n_batches=50"});
    const Json s = Json::parse(file(ex::run("trotter", cfg, 1), "_summary.json"));
    CHECK(s["norm1"] == 1.0);
    const auto& e = s["estimators"];
    for (const char* a : {"pai", "nearest", "continuous"}) {
        for (const char* b : {"pai", "nearest", "continuous"}) {
            const double d = e[a]["estimate"]["mean"].get<double>() - e[b]["estimate"]["mean"].get<double>();
            const double se = std::hypot(e[a]["estimate"]["std_error"].get<double>(),
                                         e[b]["estimate"]["std_error"].get<double>());
            CHECK(std::abs(d) <= 5 * se + 1e-12);
        }
    }
}

TEST_CASE("vqe trace") {
    const Json cfg = resolve("vqe", {"n_qubits=4", "layers=1", "iterations=0", "shots=1600", "variants=4"});
    const auto out = ex::run("vqe", cfg, 1);
    const auto rows = csv_rows(file(out, "_trace.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0][0] == "exact");
    CHECK(rows[0][2] == rows[2][2]);
    const Json s = Json::parse(file(out, "_summary.json"));
    CHECK(s["final"]["exact"]["delta_e"] == s["initial_delta_e"]);

    const Json two = resolve("vqe", {"n_qubits=4", "layers=1", "iterations=2", "shots=1600", "variants=4"});
    CHECK(ex::run("vqe", two, 1).files[0].content == ex::run("vqe", two, 2).files[0].content);
    CHECK_THROWS_AS(ex::run("vqe", resolve("vqe", {"modes=[\"sgd\"]"}), 1), pai::ConfigError);
}

TEST_CASE("fidelity-decay and rms tables") {
    const Json f = resolve("fidelity-decay", {"n_qubits=4", "layers=3", "bits=5", "variants=50", "points=4"});
    const auto frows = csv_rows(file(ex::run("fidelity-decay", f, 1), "fidelity.csv"));
    REQUIRE(frows.size() == 4);
    CHECK(frows[0][0] == "0");
    CHECK(std::stod(frows[0][1]) == Approx(1.0).margin(1e-12));
    CHECK(frows[3][0] == "48");

    const Json r = resolve("rms", {"shot_grid=[1, 4, 16]", "repeats=20", "layers=2"});
    const auto rrows = csv_rows(file(ex::run("rms", r, 1), "rms.csv"));
    REQUIRE(rrows.size() == 3);
    CHECK(rrows[0][0] == "1");
    CHECK(std::stod(rrows[0][3]) == Approx(2 * std::stod(rrows[1][3])));
    CHECK(std::stod(rrows[1][3]) == Approx(2 * std::stod(rrows[2][3])));
}

TEST_CASE("runners validate before computing") {
    CHECK_THROWS_AS(ex::run("trotter", resolve("trotter", {"n_qubits=2"}), 1), pai::ConfigError);
    CHECK_THROWS_AS(ex::run("trotter", resolve("trotter", {"observable_qubit=12"}), 1), pai::ConfigError);
    CHECK_THROWS_AS(ex::run("trotter", resolve("trotter", {"initial_state=plus"}), 1), pai::ConfigError);
    CHECK_THROWS_AS(ex::run("trotter", resolve("trotter", {"variants=0"}), 1), pai::ConfigError);
    CHECK_THROWS_AS(ex::run("overhead", resolve("overhead", {"bits_min=1"}), 1), pai::ConfigError);
    CHECK_THROWS_AS(ex::run("rms", resolve("rms", {"shot_grid=[0]"}), 1), pai::ConfigError);
}
