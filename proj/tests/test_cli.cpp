#include "cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "ghermite_cli_test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "ghermite");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return ghermite::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(cell);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("coeffs for the first classical Hermite coefficient") {
    TempDir tmp;
    const auto out = tmp.path / "c.csv";
    REQUIRE(run({"coeffs", "--lambda", "0", "--a", "0", "--support", "sym", "--n", "1", "--output", out.string()}) == 0);
    const auto rows = csv(slurp(out));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"k", "diag", "offdiag", "boundary_mass"});
    CHECK(rows[1][0] == "0");
    CHECK(std::stod(rows[1][1]) == 0.0);
    const double a1 = std::stod(rows[1][2]);
    CHECK(a1 * a1 == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("zeros CSV") {
    TempDir tmp;
    const auto out = tmp.path / "z.csv";
    REQUIRE(run({"zeros", "--lambda", "0", "--a", "0", "--support", "sym", "--n", "3", "--output", out.string()}) == 0);
    const auto rows = csv(slurp(out));
    REQUIRE(rows.size() == 4);
    CHECK(std::stod(rows[3][1]) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
}

TEST_CASE("density JSON for the alpha = 0 half line") {
    TempDir tmp;
    const auto out = tmp.path / "d.json";
    REQUIRE(run({"density", "--alpha", "0", "--a", "0", "--support", "half", "--grid", "200", "--output",
                 out.string()}) == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["case"] == "HL3");
    CHECK(j["sigma"].get<double>() == 0.0);
    CHECK(j["b"].get<double>() == doctest::Approx(2.0 * std::sqrt(6.0) / 3.0).epsilon(1e-12));

    const auto grid = tmp.path / "d.csv";
    REQUIRE(run({"density", "--alpha", "0", "--a", "0", "--grid", "50", "--format", "csv", "--output", grid.string()}) ==
            0);
    const auto rows = csv(slurp(grid));
    CHECK(rows[0] == std::vector<std::string>{"x", "f"});
    CHECK(rows.size() == 51);
}

TEST_CASE("compare: KS distance falls with n") {
    TempDir tmp;
    const auto out = tmp.path / "k.csv";
    const auto svg = tmp.path / "k.svg";
    REQUIRE(run({"compare", "--alpha", "0", "--a", "0", "--support", "sym", "--n", "20", "60", "--svg", svg.string(),
                 "--output", out.string()}) == 0);
    const auto rows = csv(slurp(out));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"n", "lambda_n", "ks"});
    CHECK(std::stod(rows[2][2]) < std::stod(rows[1][2]));
    CHECK(slurp(svg).find("<polyline") != std::string::npos);
}

TEST_CASE("energy sweep CSV") {
    TempDir tmp;
    const auto out = tmp.path / "e.csv";
    REQUIRE(run({"energy", "--alpha", "0", "--a", "0", "--n", "4", "8", "--output", out.string()}) == 0);
    const auto rows = csv(slurp(out));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"n", "lambda_n", "E_star_n", "diagnostic", "limit", "gap"});
    CHECK(std::stod(rows[1][4]) == doctest::Approx(0.75 + 0.5 * std::log(6.0)).epsilon(1e-9));
}

TEST_CASE("figure 2 carries both legends") {
    TempDir tmp;
    const auto out = tmp.path / "f2.svg";
    REQUIRE(run({"figure", "--id", "2", "--output", out.string()}) == 0);
    const auto svg = slurp(out);
    CHECK(svg.find(">a=1</text>") != std::string::npos);
    CHECK(svg.find(">a=a_c</text>") != std::string::npos);
    for (int id = 1; id <= 5; ++id) {
        const auto p = tmp.path / ("f" + std::to_string(id) + ".svg");
        CHECK(run({"figure", "--id", std::to_string(id), "--grid", "60", "--output", p.string()}) == 0);
        CHECK(fs::file_size(p) > 0);
    }
}

TEST_CASE("exit codes") {
    CHECK(run({}) == 2);
    CHECK(run({"--help"}) == 0);
    CHECK(run({"density", "--lambda", "1", "--a", "0"}) == 2);
    CHECK(run({"coeffs", "--lambda", "-1", "--a", "0", "--n", "3"}) == 2);
    CHECK(run({"figure", "--id", "9"}) == 2);
    CHECK(run({"density", "--alpha", "1", "--a", "-1"}) == 3);
    CHECK(run({"coeffs", "--lambda", "1", "--a", "-1", "--n", "3"}) == 3);
}

TEST_CASE("identical invocations give identical bytes") {
    TempDir tmp;
    const std::vector<std::vector<std::string>> commands{
        {"coeffs", "--lambda", "1", "--a", "0.5", "--n", "12"},
        {"density", "--alpha", "2", "--a", "1", "--format", "svg"},
        {"compare", "--alpha", "1", "--a", "0", "--n", "10", "20"},
    };
    for (const auto& cmd : commands) {
        auto first = cmd, second = cmd;
        first.insert(first.end(), {"--output", (tmp.path / "1").string()});
        second.insert(second.end(), {"--output", (tmp.path / "2").string()});
        REQUIRE(run(first) == 0);
        REQUIRE(run(second) == 0);
        CHECK(slurp(tmp.path / "1") == slurp(tmp.path / "2"));
    }
}
