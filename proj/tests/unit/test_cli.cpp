#include <doctest.h>

#include "nslab/config.hpp"
#include "nslab/errors.hpp"
#include "nslab/run.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nslab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string config_path(const std::string& name) { return std::string(NSLAB_CONFIG_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("nslab_test_" + name);
    fs::remove_all(dir);
    return dir;
}

json circle_config(int samples, std::vector<double> times) {
    return json{
        {"dim", 2},
        {"chart", {{"family", "euclidean"}}},
        {"symbol", {{"family", "quadratic"}, {"constant", "-1"}}},
        {"front", {{"family", "circle"}, {"radius", 1.0}, {"samples", samples}}},
        {"flow", {{"form", "modified"}, {"dt", 0.01}, {"t_end", times.back()}, {"snapshot_times", times}}},
    };
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Domain;
}

std::vector<std::vector<std::string>> rows_of(const std::string& csv) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        out.push_back(cells);
    }
    return out;
}

} // namespace

TEST_CASE("schema validation") {
    CHECK(kind_of([] { load_config(config_path("both_sources.json")); }) == ErrorKind::Config);
    CHECK(kind_of([] { load_config(config_path("does_not_exist.json")); }) == ErrorKind::Io);

    json j = circle_config(8, {0.1});
    j["colour"] = "blue";
    CHECK(kind_of([&] { parse_config(j); }) == ErrorKind::Config);

    j = circle_config(8, {0.1});
    j["symbol"]["constant"] = "-1 + y";
    CHECK(kind_of([&] { parse_config(j); }) == ErrorKind::Parse);

    j = circle_config(8, {0.1});
    j["symbol"]["constant"] = "-1 + u";
    CHECK(kind_of([&] { parse_config(j); }) == ErrorKind::Config);

    j = circle_config(8, {0.1});
    j["h"] = "w";
    CHECK(kind_of([&] { parse_config(j); }) == ErrorKind::Config);

    j = circle_config(8, {0.1});
    j["flow"]["method"] = "euler";
    CHECK(kind_of([&] { parse_config(j); }) == ErrorKind::Config);
}

TEST_CASE("bundled configs parse") {
    for (const char* name : {"flat_circle.json", "linear_index_modified.json", "linear_index_hamilton.json",
                             "linear_index_newtonian.json", "sphere_latitude.json", "no_nu.json", "wavefront_w.json"}) {
        CAPTURE(name);
        const SimConfig cfg = load_config(config_path(name));
        CHECK(cfg.dim == 2);
        CHECK(cfg.chart.has_value());
    }
}

TEST_CASE("solve_nu failures name their stage") {
    const SimConfig cfg = load_config(config_path("no_nu.json"));
    try {
        run(cfg);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoAdmissibleNu);
        CHECK(std::string(e.what()).find("stage solve_nu") != std::string::npos);
        CHECK(std::string(e.what()).find("no admissible nu") != std::string::npos);
        CHECK(exit_code_for(e.kind()) == 2);
    }
}

TEST_CASE("single-snapshot export has one row per sample") {
    const SimConfig cfg = parse_config(circle_config(64, {0.0}));
    const fs::path dir = scratch("single");
    export_outputs(cfg, run(cfg), dir.string());
    const auto rows = rows_of(slurp(dir / "fronts.csv"));
    REQUIRE(rows.size() == 65);
    CHECK(rows[0] == std::vector<std::string>{"t", "sample_index", "q1", "x1", "x2", "N1", "N2", "nu", "phase"});
    for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][1] == std::to_string(i - 1));
}

TEST_CASE("fronts are ordered by time then sample, with a flat phase column") {
    const SimConfig cfg = load_config(config_path("flat_circle.json"));
    const fs::path dir = scratch("flat");
    export_outputs(cfg, run(cfg), dir.string());
    const auto rows = rows_of(slurp(dir / "fronts.csv"));
    REQUIRE(rows.size() == 1 + 4 * 64);
    for (size_t snap = 0; snap < 4; ++snap) {
        double lo = INFINITY, hi = -INFINITY;
        for (size_t i = 0; i < 64; ++i) {
            const auto& r = rows[1 + snap * 64 + i];
            CHECK(r[1] == std::to_string(i));
            CHECK(std::stod(r[0]) == std::stod(rows[1 + snap * 64][0]));
            lo = std::min(lo, std::stod(r[8]));
            hi = std::max(hi, std::stod(r[8]));
        }
        CHECK(hi - lo <= 1e-8);
    }
    CHECK(std::stod(rows.back()[0]) == 1.0);
    CHECK(rows[1][3].size() <= 24);

    const auto traj = rows_of(slurp(dir / "trajectories.csv"));
    CHECK(traj[0] == std::vector<std::string>{"t", "sample_index", "x1", "x2", "p1", "p2", "s", "H", "Omega", "W"});
    CHECK(fs::exists(dir / "fronts.dat"));
}

TEST_CASE("report echoes the configuration") {
    const SimConfig cfg = load_config(config_path("linear_index_newtonian.json"));
    const fs::path dir = scratch("report");
    export_outputs(cfg, run(cfg), dir.string());
    const json report = json::parse(slurp(dir / "report.json"));
    const json input = json::parse(slurp(config_path("linear_index_newtonian.json")));
    CHECK(report.at("config").dump() == input.dump());
    CHECK(report.at("tool") == kToolName);
    CHECK(report.at("version") == kToolVersion);
    CHECK(report.at("form") == "newtonian");
    CHECK(report.at("diagnostics").at("snapshots").size() == 7);
    CHECK(report.at("diagnostics").at("conservation").at("max_H_drift").is_null());
    CHECK(report.at("diagnostics").at("conservation").at("max_W_drift").get<double>() < 1e-8);
}

TEST_CASE("repeated runs are byte-identical") {
    const SimConfig cfg = load_config(config_path("linear_index_modified.json"));
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    export_outputs(cfg, run(cfg), a.string());
    export_outputs(cfg, run(cfg), b.string());
    for (const char* f : {"fronts.csv", "trajectories.csv", "fronts.dat", "report.json"}) {
        CAPTURE(f);
        CHECK(slurp(a / f) == slurp(b / f));
    }
}

TEST_CASE("unwritable output directory is an I/O error") {
    const SimConfig cfg = parse_config(circle_config(8, {0.0}));
    const fs::path blocker = scratch("blocker");
    std::ofstream(blocker) << "not a directory";
    CHECK(kind_of([&] { export_outputs(cfg, run(cfg), (blocker / "out").string()); }) == ErrorKind::Io);
}

TEST_CASE("nu report") {
    const SimConfig cfg = load_config(config_path("flat_circle.json"));
    const auto rows = rows_of(nu_table(cfg));
    REQUIRE(rows.size() == 65);
    CHECK(rows[0].back() == "Omega");
    CHECK(std::stod(rows[5][6]) == doctest::Approx(1.0));
    CHECK(std::stod(rows[5][7]) == doctest::Approx(2.0));
}

TEST_CASE("state grids and force tables") {
    CHECK(kind_of([] { parse_state_grid("x1=0:1:3", 2); }) == ErrorKind::Config);
    CHECK(kind_of([] { parse_state_grid("x1=0:1:3,x2=0:0:1,u1=1:1:1,u2=zero", 2); }) == ErrorKind::Config);
    const auto grid = parse_state_grid("x1=-1:1:3,x2=0:0:1,u1=0.5:1:2,u2=0.2:0.2:1", 2);
    REQUIRE(grid.size() == 4);
    CHECK(grid[0].count == 3);

    const SimConfig cfg = load_config(config_path("linear_index_newtonian.json"));
    const auto rows = rows_of(force_table(cfg, grid));
    REQUIRE(rows.size() == 1 + 6);
    CHECK(rows[0].size() == 2 + 2 + 1 + 2 + 2);
    // h is absent, so both force columns coincide.
    for (size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][5] == rows[i][7]);
        CHECK(rows[i][6] == rows[i][8]);
    }
}
