#include "ghermite/equilibrium.hpp"
#include "ghermite/errors.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace ghermite;

namespace {

constexpr double kPi = std::numbers::pi;
const auto kHalf = SupportKind::HalfLine;
const auto kSym = SupportKind::SymmetricTruncated;

// Nodes that round onto an integrable endpoint singularity carry no weight.
double tanh_sinh(const std::function<double(double)>& f, double lo, double hi) {
    boost::math::quadrature::tanh_sinh<double> q;
    return q.integrate(
        [&](double x) {
            const double v = f(x);
            return std::isfinite(v) ? v : 0.0;
        },
        lo, hi);
}

// Hard-edge half-line density written out independently of the library, integrated with
// the exact distances to the endpoints that tanh-sinh supplies.
double hl2_mass(double alpha, double s, double b) {
    boost::math::quadrature::tanh_sinh<double> q;
    return q.integrate(
        [&](double x, double xc) {
            const double left = xc < 0 ? -xc : x - s;
            const double right = xc > 0 ? xc : b - x;
            return std::sqrt(right / left) / (2 * kPi) * (2 * x + b - s - 2 * alpha * std::sqrt(s / b) / x);
        },
        s, b);
}

// Densities written out per case from the distances l = t - sigma and r = b - t, so that
// tanh-sinh can pass exact edge distances instead of differences of rounded abscissae.
double oracle_density(const EquilibriumMeasure& m, double t, double l, double r) {
    const double s = m.sigma, b = m.b, al = m.alpha;
    switch (m.tag) {
        case CaseTag::HL1: return std::sqrt(r * l) / kPi * (1 + al / (std::sqrt(s * b) * t));
        case CaseTag::HL2: return std::sqrt(r / l) / (2 * kPi) * (2 * t + b - s - 2 * al * std::sqrt(s / b) / t);
        case CaseTag::HL3: return std::sqrt(r / l) / (2 * kPi) * (2 * t + b - s);
        case CaseTag::SYM1:
        case CaseTag::SYM2: return std::sqrt(r * (b + t) * l * (t + s)) / (kPi * t);
        case CaseTag::SYM3: return std::sqrt(r * (b + t) / (l * (t + s))) / (kPi * t) * (t * t - al * s / b);
        case CaseTag::SYM4: return t / kPi * std::sqrt(r * (b + t) / (l * (t + s)));
    }
    return 0.0;
}

// Mass of [sigma, hi] on one support component.
double density_integral(const EquilibriumMeasure& m, double hi) {
    const double lo = m.sigma;
    const double full = m.b;
    boost::math::quadrature::tanh_sinh<double> q;
    return q.integrate(
        [&](double t, double tc) {
            const double l = tc < 0 ? -tc : t - lo;
            const double r = tc > 0 && hi == full ? tc : full - t;
            const double v = oracle_density(m, t, l, r);
            return std::isfinite(v) ? v : 0.0;
        },
        lo, hi);
}

std::vector<EquilibriumMeasure> sample_measures() {
    std::vector<EquilibriumMeasure> out;
    for (double alpha : {0.0, 0.5, 1.0, 2.0})
        for (double a : {0.0, 0.25, 0.5, 1.0, 1.5})
            for (auto kind : {kHalf, kSym}) out.push_back(solve_endpoints(alpha, a, kind));
    out.push_back(solve_endpoints(0.0, -1.0, kHalf));
    out.push_back(solve_endpoints(0.0, -2.0, kHalf));
    return out;
}

}  // namespace

TEST_CASE("endpoint closed forms") {
    const auto hl3 = solve_endpoints(0, 0, kHalf);
    CHECK(hl3.tag == CaseTag::HL3);
    CHECK(hl3.sigma == 0.0);
    CHECK(hl3.b == doctest::Approx(2 * std::sqrt(6.0) / 3).epsilon(1e-15));

    const auto sym = critical_sigma0_symmetric(2.0);
    CHECK(std::abs(sym.sigma - std::sqrt(3 - std::sqrt(5.0))) < 1e-12);
    CHECK(std::abs(sym.b - std::sqrt(3 + std::sqrt(5.0))) < 1e-12);

    CHECK(solve_endpoints(0, 0.25, kSym).b == doctest::Approx(std::sqrt(2.0625)).epsilon(1e-15));
    CHECK(solve_endpoints(0, -5, kHalf).sigma == doctest::Approx(-std::numbers::sqrt2));
    CHECK(solve_endpoints(0, -5, kHalf).b == doctest::Approx(std::numbers::sqrt2).epsilon(1e-15));
}

TEST_CASE("critical half-line point is where the hard-edge constraint becomes active") {
    for (double alpha : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const auto c = critical_sigma0_halfline(alpha);
        CHECK(c.sigma > 0.0);
        CHECK(c.b > c.sigma);
        CHECK(std::abs(halfline_endpoint_equation(alpha, c.sigma, c.b)) < 1e-12);
        CHECK(std::abs(c.b + c.sigma - 2 * alpha / std::sqrt(c.sigma * c.b)) < 1e-10);
    }
    const auto c = critical_sigma0_halfline(2.0);
    CHECK(c.sigma == doctest::Approx(0.6177340961).epsilon(1e-9));
    CHECK(c.b == doctest::Approx(2.5619043942).epsilon(1e-9));
    CHECK_THROWS_AS(critical_sigma0_halfline(0.0), DomainError);
}

TEST_CASE("hard-edge endpoint agrees with the unit-mass condition") {
    // Solve mass(b) = 1 for the written-out density with Boost's TOMS 748.
    for (auto [alpha, s] : {std::pair{2.0, 1.0}, std::pair{0.5, 0.25}, std::pair{1.0, 1.5}}) {
        auto mass = [&](double b) {
            return hl2_mass(alpha, s, b) - 1.0;
        };
        boost::uintmax_t iters = 100;
        const auto r = boost::math::tools::toms748_solve(mass, s + 0.5, s + 5.0,
                                                         boost::math::tools::eps_tolerance<double>(45), iters);
        const double ref = 0.5 * (r.first + r.second);
        const auto m = solve_endpoints(alpha, s, kHalf);
        CHECK(m.tag == CaseTag::HL2);
        CHECK(m.b == doctest::Approx(ref).epsilon(1e-11));
        CHECK(std::abs(halfline_endpoint_equation(alpha, s, m.b)) < 1e-12);
    }
    // The curve labelled b = 2.58 in the alpha = 2, a = 1 half-line plot is at 2.59976...
    CHECK(solve_endpoints(2.0, 1.0, kHalf).b == doctest::Approx(2.5997623142660515).epsilon(1e-12));
}

TEST_CASE("case dispatch and continuity at the critical point") {
    CHECK(solve_endpoints(2.0, 0.0, kHalf).tag == CaseTag::HL1);
    CHECK(solve_endpoints(2.0, 0.5, kHalf).tag == CaseTag::HL1);
    CHECK(solve_endpoints(2.0, 1.0, kHalf).tag == CaseTag::HL2);
    CHECK(solve_endpoints(2.0, 0.0, kSym).tag == CaseTag::SYM1);
    CHECK(solve_endpoints(2.0, 0.5, kSym).tag == CaseTag::SYM2);
    CHECK(solve_endpoints(2.0, 1.0, kSym).tag == CaseTag::SYM3);
    CHECK(solve_endpoints(0.0, 1.0, kSym).tag == CaseTag::SYM4);

    for (double alpha : {0.5, 2.0}) {
        const auto h = critical_sigma0_halfline(alpha);
        const auto above = solve_endpoints(alpha, h.sigma * (1 + 1e-12), kHalf);
        CHECK(above.tag == CaseTag::HL2);
        CHECK(std::abs(above.b - h.b) < 1e-8);
        const auto s = critical_sigma0_symmetric(alpha);
        const auto sabove = solve_endpoints(alpha, s.sigma * (1 + 1e-12), kSym);
        CHECK(sabove.tag == CaseTag::SYM3);
        CHECK(std::abs(sabove.b - s.b) < 1e-8);
        CHECK(std::abs(symmetric_endpoint_equation(alpha, sabove.sigma, sabove.b)) < 1e-12);
    }
}

TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(solve_endpoints(-0.1, 0.0, kHalf), DomainError);
    CHECK_THROWS_AS(solve_endpoints(1.0, -0.5, kHalf), DomainError);
    CHECK_THROWS_AS(solve_endpoints(0.0, -0.5, kSym), DomainError);
    CHECK_THROWS_AS(density_eval(solve_endpoints(0, 0, kHalf), 2.0), DomainError);
}

TEST_CASE("unit mass for every case, by independent quadrature") {
    for (const auto& m : sample_measures()) {
        CAPTURE(to_string(m.tag));
        CAPTURE(m.alpha);
        CAPTURE(m.a);
        CHECK(mass_error(m) < 1e-8);
        CHECK(density_cdf(m, m.b + 1.0) == doctest::Approx(1.0).epsilon(1e-12));
        double mass = density_integral(m, m.b);
        if (m.support_kind == kSym) mass *= 2;
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
        // cdf against the same quadrature at an interior point.
        const double x = m.sigma + 0.37 * (m.b - m.sigma);
        double partial = density_integral(m, x);
        if (m.support_kind == kSym) partial += 0.5;
        CHECK(density_cdf(m, x) == doctest::Approx(partial).epsilon(1e-9));
    }
}

TEST_CASE("alpha = 0 half-line cdf antiderivative") {
    // x = b sin^2(t): F = (b^2/pi)(3t/4 + sin 2t/4 - sin 4t/16).
    const auto m = solve_endpoints(0, 0, kHalf);
    for (double x : {0.01, 0.4, 1.0, 1.6}) {
        const double t = std::asin(std::sqrt(x / m.b));
        const double ref = m.b * m.b / kPi * (0.75 * t + std::sin(2 * t) / 4 - std::sin(4 * t) / 16);
        CHECK(density_cdf(m, x) == doctest::Approx(ref).epsilon(1e-13));
    }
    CHECK(density_cdf(m, -1.0) == 0.0);
}

TEST_CASE("semicircle") {
    const auto m = solve_endpoints(0, 0, kSym);
    for (double x : {-1.2, -0.3, 0.0, 0.8}) {
        CHECK(density_eval(m, x) == doctest::Approx(std::sqrt(2 - x * x) / kPi).epsilon(1e-13));
        const double ref = 0.5 + (x * std::sqrt(2 - x * x) / 2 + std::asin(x / std::sqrt(2.0))) / kPi;
        CHECK(density_cdf(m, x) == doctest::Approx(ref).epsilon(1e-13));
        // U(x) = 1/2 + log(2)/2 - x^2/2 on the support.
        CHECK(log_potential(m, x) == doctest::Approx(0.5 + 0.5 * std::log(2.0) - x * x / 2).epsilon(1e-12));
    }
    const auto r = robin_constant(m);
    CHECK(r.max_deviation < 1e-6);
    CHECK(r.constant == doctest::Approx(0.5 + 0.5 * std::log(2.0)).epsilon(1e-12));
    CHECK(r.min_exterior_slack >= -1e-6);
}

TEST_CASE("far-field potential") {
    for (const auto& m : {solve_endpoints(2, 0, kHalf), solve_endpoints(0, 1, kHalf)}) {
        const double mean = tanh_sinh([&](double x) { return x * density_eval(m, x); }, m.sigma, m.b);
        const double var = tanh_sinh([&](double x) { return (x - mean) * (x - mean) * density_eval(m, x); }, m.sigma,
                                     m.b);
        for (double x : {50.0, 500.0}) {
            const double err = std::abs(log_potential(m, x) + std::log(x - mean));
            CHECK(err <= var / ((x - mean) * (x - mean)));
        }
    }
}

TEST_CASE("variational characterization holds for every case") {
    for (const auto& m : sample_measures()) {
        CAPTURE(to_string(m.tag));
        CAPTURE(m.alpha);
        CAPTURE(m.a);
        const auto r = robin_constant(m);
        CHECK(r.max_deviation < 1e-8);
        CHECK(r.min_exterior_slack >= -1e-6);
        CHECK(r.exterior_points == 20);
        CHECK(r.min_density >= 0.0);
    }
    CHECK(robin_constant(solve_endpoints(2, 0, kHalf)).constant == doctest::Approx(1.5146431).epsilon(1e-7));
}

TEST_CASE("an active hard wall lowers the potential just outside the constrained support") {
    // alpha = 2, a = 1: the measure is pushed against the wall, so just left of it -- outside
    // the admissible set -- U + Q/2 falls below the Robin constant. Near the origin the
    // logarithmic barrier wins again.
    const auto m = solve_endpoints(2, 1, kHalf);
    const double c = robin_constant(m).constant;
    auto value = [&](double x) { return log_potential(m, x) + 0.5 * external_field(2, x); };
    for (double x : {0.9, 0.99}) CHECK(value(x) < c);
    CHECK(value(0.25) > c);
}

TEST_CASE("specializations") {
    // HL2 with alpha = 0 is the HL3 density.
    EquilibriumMeasure hl2{kHalf, 0.0, 0.5, CaseTag::HL2, 0.5, 0.0};
    const auto hl3 = solve_endpoints(0, 0.5, kHalf);
    hl2.b = hl3.b;
    for (double x : {0.6, 1.0, 1.7}) CHECK(std::abs(density_eval(hl2, x) - density_eval(hl3, x)) < 1e-12);

    // SYM1 tends to the semicircle as alpha -> 0+.
    const auto sym1 = solve_endpoints(1e-8, 0, kSym);
    for (double x : {0.3, 0.9, 1.3}) CHECK(density_eval(sym1, x) == doctest::Approx(std::sqrt(2 - x * x) / kPi).epsilon(1e-6));
}

TEST_CASE("edge behaviour") {
    const auto soft = solve_endpoints(2, 0, kHalf);
    CHECK(density_eval(soft, soft.sigma) == 0.0);
    CHECK(density_eval(soft, soft.b) == 0.0);
    const auto hard = solve_endpoints(2, 1, kHalf);
    CHECK(std::isinf(density_eval(hard, hard.sigma)));
    const auto wall = solve_endpoints(0, -std::numbers::sqrt2, kHalf);
    CHECK(density_eval(wall, wall.sigma) == 0.0);
}

TEST_CASE("energies") {
    const double hl3_zero = 0.75 + 0.5 * std::log(6.0);
    CHECK(std::abs(halfline_energy_closed_form(0.0) - hl3_zero) < 1e-12);
    const auto e0 = equilibrium_energy(solve_endpoints(0, 0, kHalf));
    REQUIRE(e0.closed_form);
    CHECK(std::abs(e0.energy - hl3_zero) < 1e-7);

    // The wall at -sqrt 2 no longer touches the measure: semicircle energy.
    const double semicircle = 0.75 + 0.5 * std::log(2.0);
    CHECK(std::abs(equilibrium_energy(solve_endpoints(0, -2, kHalf)).energy - semicircle) < 1e-7);
    CHECK(std::abs(equilibrium_energy(solve_endpoints(0, 0, kSym)).energy - semicircle) < 1e-7);

    for (double a : {-1.0, 0.5, 1.0, 1.5}) {
        const auto e = equilibrium_energy(solve_endpoints(0, a, kHalf));
        CHECK(std::abs(e.energy - *e.closed_form) < 1e-7);
    }
    // Symmetric, alpha = 0: 3/4 + log(2)/2 + a^2.
    for (double a : {0.25, 0.5, 1.0}) {
        CHECK(std::abs(equilibrium_energy(solve_endpoints(0, a, kSym)).energy - (semicircle + a * a)) < 1e-7);
    }
}

TEST_CASE("small-alpha slope is the mean of 2 log(1/x) under the alpha = 0 measure") {
    // Envelope theorem: dE*/dalpha at 0 equals int 2 log(1/x) dmu_0 = 1 + log 6 for a = 0.
    const auto m0 = solve_endpoints(0, 0, kHalf);
    const double mean_log = tanh_sinh([&](double x) { return -2 * std::log(x) * density_eval(m0, x); }, 0.0, m0.b);
    CHECK(mean_log == doctest::Approx(1 + std::log(6.0)).epsilon(1e-9));
    const double e0 = equilibrium_energy(m0).energy;
    const double alpha = 1e-5;
    const double slope = (equilibrium_energy(solve_endpoints(alpha, 0, kHalf)).energy - e0) / alpha;
    CHECK(slope == doctest::Approx(1 + std::log(6.0)).epsilon(1e-3));
}

TEST_CASE("exports") {
    const auto m = solve_endpoints(0, 0, kSym);
    const auto grid = density_grid(m, 5);
    REQUIRE(grid.size() == 10);
    CHECK(grid.front().first == doctest::Approx(-std::numbers::sqrt2));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(grid[i].first == doctest::Approx(-grid[grid.size() - 1 - i].first));
        CHECK(grid[i].second == doctest::Approx(grid[grid.size() - 1 - i].second));
    }
    std::ostringstream csv;
    write_density_csv(grid, csv);
    CHECK(csv.str().rfind("x,f\n", 0) == 0);

    const std::string json = measure_json(solve_endpoints(0, 0, kHalf));
    for (const char* key : {"\"support\": \"half\"", "\"alpha\": 0", "\"a\": 0", "\"case\": \"HL3\"", "\"sigma\": 0",
                            "\"b\": 1.63299316185545", "\"robin_constant\"", "\"energy\"", "\"mass_error\""})
        CHECK(json.find(key) != std::string::npos);
    CHECK_THROWS_AS(density_grid(m, 1), DomainError);
}
