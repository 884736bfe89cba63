#include "ghermite/equilibrium.hpp"
#include "ghermite/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <regex>
#include <sstream>

using namespace ghermite;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int count(const std::string& text, const std::string& needle) {
    int n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("numbers round-trip through 17 significant digits") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-300, 300);
    for (int i = 0; i < 2000; ++i) {
        const double v = std::ldexp(mant(rng), expo(rng));
        CHECK(std::stod(io::format_number(v)) == v);
    }
    CHECK(io::format_number(0.1) == "0.10000000000000001");
    CHECK(io::format_number(-2.0) == "-2");
    CHECK(io::format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("flat JSON keeps insertion order and maps non-finite values to null") {
    io::JsonObject obj;
    obj.add("case", "HL3").add("b", 2.0 * std::sqrt(6.0) / 3.0).add("n", 3).add("ok", true);
    obj.add("bad", std::numeric_limits<double>::quiet_NaN()).add("quote", "a\"b");
    const auto text = obj.str();
    const auto parsed = nlohmann::ordered_json::parse(text);
    std::vector<std::string> keys;
    for (const auto& [k, v] : parsed.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"case", "b", "n", "ok", "bad", "quote"});
    CHECK(parsed["b"].get<double>() == 2.0 * std::sqrt(6.0) / 3.0);
    CHECK(parsed["bad"].is_null());
    CHECK(parsed["quote"] == "a\"b");
}

TEST_CASE("empty plot is a valid document with axes") {
    const auto svg = io::render_svg({});
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("width=\"800\" height=\"500\"") != std::string::npos);
    CHECK(count(svg, "<line") >= 4);
    CHECK(count(svg, "<polyline") == 0);
    CHECK(svg.find("</svg>\n") == svg.size() - 7);
}

TEST_CASE("semicircle plot") {
    const auto m = solve_endpoints(0.0, 0.0, SupportKind::SymmetricTruncated);
    const auto grid = density_grid(m, 101);
    double peak = 0.0, at = 1.0;
    for (const auto& [x, f] : grid) {
        CHECK(f == doctest::Approx(std::sqrt(std::max(0.0, 2 - x * x)) / std::numbers::pi).epsilon(1e-12).scale(1.0));
        if (f > peak) {
            peak = f;
            at = x;
        }
    }
    CHECK(std::abs(at) < 1e-12);
    CHECK(peak == doctest::Approx(std::sqrt(2.0) / std::numbers::pi).epsilon(1e-14));
    // Mirror symmetry of the grid.
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(grid[i].first == -grid[grid.size() - 1 - i].first);
        CHECK(grid[i].second == doctest::Approx(grid[grid.size() - 1 - i].second).epsilon(1e-14));
    }
    const auto svg = io::render_svg({{"semicircle", grid}}, {"semicircle", "x", "density", 0.0});
    CHECK(count(svg, "<polyline") == 1);
    CHECK(svg.find(">semicircle</text>") != std::string::npos);
}

TEST_CASE("clipping keeps hard-edge spikes inside the frame") {
    const io::Series s{"spike", {{0.0, 1e9}, {0.5, 0.3}, {1.0, std::numeric_limits<double>::infinity()}}};
    const auto svg = io::render_svg({s}, {"", "x", "", 1.2});
    const std::regex pts("points=\"([^\"]*)\"");
    std::smatch match;
    REQUIRE(std::regex_search(svg, match, pts));
    std::istringstream in(match[1].str());
    std::string pair;
    int n = 0;
    while (in >> pair) {
        const double y = std::stod(pair.substr(pair.find(',') + 1));
        CHECK(y >= 40.0);
        CHECK(y <= 450.0);
        ++n;
    }
    CHECK(n == 3);
}

TEST_CASE("rendering is byte stable and writes atomically") {
    const auto m = solve_endpoints(2.0, 1.0, SupportKind::HalfLine);
    const std::vector<io::Series> series{{"a=1", density_grid(m, 80)}};
    const auto dir = std::filesystem::temp_directory_path() / "ghermite_io_test";
    std::filesystem::create_directories(dir);
    const auto p1 = dir / "one.svg";
    const auto p2 = dir / "two.svg";
    io::emit_svg(series, p1, {"", "x", "", 1.5});
    io::emit_svg(series, p2, {"", "x", "", 1.5});
    CHECK(slurp(p1) == slurp(p2));
    CHECK_FALSE(std::filesystem::exists(dir / "one.svg.tmp"));
    io::write_atomically(p1, "replaced\n");
    CHECK(slurp(p1) == "replaced\n");
    CHECK_THROWS(io::write_atomically(dir / "missing" / "x.txt", "x"));
    std::filesystem::remove_all(dir);
}
