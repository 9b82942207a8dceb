// End-to-end tests of the command-line tool: exit codes, output records,
// CSV structure, grid parsing, and run-to-run determinism.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

std::string cli_path() { return HARDY_CLI_PATH; }
std::string fixture(const std::string& name) {
    return (fs::path(HARDY_FIXTURES_DIR) / name).string();
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    const fs::path log = out_dir / "stdout.log";
    const std::string cmd =
        cli_path() + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path d = fs::temp_directory_path() / ("hardy_cli_test_" + tag);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

double record_value(const std::string& record, const std::string& key) {
    std::istringstream in(record);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string k;
        double v;
        if ((ls >> k >> v) && k == key) return v;
    }
    FAIL("key not found in record: " << key);
    return 0.0;
}

} // namespace

TEST_CASE("compute writes a record with value, field, and iteration log") {
    const fs::path d = fresh_dir("compute");
    const RunResult r = run_cli("compute --domain " + fixture("interval.json") +
                                    " --p 2 --ladder 0.0625 --depth 1e-30 --growth 1.8"
                                    " --out " + d.string() + " --stem iv",
                                d);
    REQUIRE(r.exit_code == 0);

    const std::string record = slurp(d / "iv.txt");
    const double value = record_value(record, "value");
    CHECK(value == Catch::Approx(0.25).epsilon(0.05));
    CHECK(value >= 0.25 - 1e-9);
    CHECK(record_value(record, "alpha") == Catch::Approx(0.5).margin(0.02));
    CHECK(record.find("source solver") != std::string::npos);

    CHECK(fs::exists(d / "iv_field.txt"));
    const auto log = parse_csv(d / "iv_iterations.csv");
    REQUIRE(log.size() >= 2);
    CHECK(log[0] == std::vector<std::string>{"iteration", "value", "residual", "step_size"});
    for (std::size_t i = 1; i < log.size(); ++i) REQUIRE(log[i].size() == 4);
    // quotient values never increase along the descent
    CHECK(std::stod(log.back()[1]) <= std::stod(log[1][1]) + 1e-12);
}

TEST_CASE("invalid inputs exit with code 2") {
    const fs::path d = fresh_dir("invalid");
    CHECK(run_cli("compute --domain " + fixture("square.json") + " --p 0.9", d).exit_code == 2);
    CHECK(run_cli("compute --domain /no/such/file.json", d).exit_code == 2);
    CHECK(run_cli("sweep --domain " + fixture("interval.json") + " --grid 2.0:1.5:0.2", d)
              .exit_code == 2);
    CHECK(run_cli("oracle --shape hexagon", d).exit_code == 2);
    CHECK(run_cli("frobnicate", d).exit_code == 2);
    CHECK(run_cli("compute", d).exit_code == 2); // --domain is required
}

TEST_CASE("iteration cap exhaustion exits with code 3") {
    const fs::path d = fresh_dir("nonconv");
    const RunResult r = run_cli("compute --domain " + fixture("interval.json") +
                                    " --p 1.5 --ladder 0.0625 --depth 1e-30 --seed 7"
                                    " --max-iterations 3 --out " + d.string(),
                                d);
    CHECK(r.exit_code == 3);
}

TEST_CASE("sweep CSV has the documented schema and inclusive grid endpoints") {
    const fs::path d = fresh_dir("sweep");
    const RunResult r = run_cli("sweep --domain " + fixture("interval.json") +
                                    " --grid 1.8:2.2:0.2 --mesh-size 0.03125 --depth 1e-30"
                                    " --growth 1.8 --no-fd --jobs 2 --out " + d.string() +
                                    " --stem sw",
                                d);
    REQUIRE(r.exit_code == 0);

    const auto rows = parse_csv(d / "sw.csv");
    REQUIRE(rows.size() == 4); // header + 1.8, 2.0, 2.2 (stop endpoint included)
    CHECK(rows[0] ==
          std::vector<std::string>{"p", "H", "alpha", "transform", "dH_formula", "dH_fd",
                                   "in_A", "continuity_delta", "field_distance", "converged"});
    const std::vector<double> expect_p = {1.8, 2.0, 2.2};
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 10);
        CHECK(std::stod(rows[i][0]) == Catch::Approx(expect_p[i - 1]).margin(1e-12));
        CHECK(std::stod(rows[i][1]) > 0.0); // H parses back as a positive number
        CHECK(rows[i][9] == "1");
    }
    // transform column is non-decreasing across the grid
    for (std::size_t i = 2; i < rows.size(); ++i)
        CHECK(std::stod(rows[i][3]) >= std::stod(rows[i - 1][3]) - 1e-9);
    CHECK(fs::exists(d / "sw_summary.txt"));
}

TEST_CASE("identical sweep configurations produce byte-identical CSV output") {
    const fs::path d1 = fresh_dir("det1");
    const fs::path d2 = fresh_dir("det2");
    const std::string args = "sweep --domain " + fixture("interval.json") +
                             " --grid 1.8,2.0,2.2 --mesh-size 0.03125 --depth 1e-30"
                             " --growth 1.8 --no-fd --stem det --out ";
    REQUIRE(run_cli(args + d1.string(), d1).exit_code == 0);
    REQUIRE(run_cli(args + d2.string(), d2).exit_code == 0);
    CHECK(slurp(d1 / "det.csv") == slurp(d2 / "det.csv"));
}

TEST_CASE("oracle records are tagged as oracle-sourced reference values") {
    const fs::path d = fresh_dir("oracle");
    REQUIRE(run_cli("oracle --shape interval --length 1 --out " + d.string(), d).exit_code == 0);
    const std::string rec = slurp(d / "oracle_interval.txt");
    CHECK(rec.find("source oracle") != std::string::npos);
    CHECK(record_value(rec, "value") ==
          Catch::Approx(9.869604401089358).epsilon(1e-10));

    REQUIRE(run_cli("oracle --shape radial --inner 1 --outer 2 --dim 1 --p 2 --a 1"
                    " --out " + d.string() + " --stem rad",
                    d)
                .exit_code == 0);
    CHECK(record_value(slurp(d / "rad.txt"), "value") == Catch::Approx(0.25).epsilon(0.02));
}

TEST_CASE("values are reported to 12 significant digits") {
    const fs::path d = fresh_dir("digits");
    REQUIRE(run_cli("oracle --shape disk --radius 1 --out " + d.string(), d).exit_code == 0);
    const std::string rec = slurp(d / "oracle_disk.txt");
    // "5.78318596295" carries 12 significant digits
    CHECK(rec.find("5.78318596295") != std::string::npos);
}
