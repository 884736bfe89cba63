#include "ghermite/equilibrium.hpp"

#include "ghermite/errors.hpp"
#include "ghermite/gauss_legendre.hpp"
#include "ghermite/io.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace ghermite {

std::string to_string(CaseTag tag) {
    switch (tag) {
        case CaseTag::HL1: return "HL1";
        case CaseTag::HL2: return "HL2";
        case CaseTag::HL3: return "HL3";
        case CaseTag::SYM1: return "SYM1";
        case CaseTag::SYM2: return "SYM2";
        case CaseTag::SYM3: return "SYM3";
        case CaseTag::SYM4: return "SYM4";
    }
    return "?";
}

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

bool symmetric(const EquilibriumMeasure& m) { return m.support_kind == SupportKind::SymmetricTruncated; }

bool soft_left_edge(const EquilibriumMeasure& m) {
    return m.tag == CaseTag::HL1 || m.tag == CaseTag::SYM1 || m.tag == CaseTag::SYM2;
}

// Hybrid solver on [lo, hi] with f(lo) < 0 < f(hi): bisection to a 1e-6 bracket,
// then Newton to 1e-13, falling back to bisection whenever Newton leaves the bracket.
double solve_increasing(const std::function<double(double)>& f, const std::function<double(double)>& df,
                        double lo, double hi) {
    double flo = f(lo);
    double fhi = f(hi);
    if (!(flo < 0.0 && fhi > 0.0)) {
        std::ostringstream msg;
        msg << "endpoint equation has no sign change on [" << lo << ", " << hi << "]";
        throw InfeasibleCase(msg.str());
    }
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) lo = mid;
        else hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 100; ++iter) {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (fx < 0.0) lo = x;
        else hi = x;
        double next = x - fx / df(x);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - x);
        x = next;
        if (step < 1e-13 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

// ---- theta parametrization x = sigma + (b - sigma) sin^2(theta) of [sigma, b] ----

double x_of_theta(const EquilibriumMeasure& m, double theta) {
    const double s = std::sin(theta);
    return m.sigma + (m.b - m.sigma) * s * s;
}

double theta_of_x(const EquilibriumMeasure& m, double x) {
    const double r = std::clamp((x - m.sigma) / (m.b - m.sigma), 0.0, 1.0);
    return std::asin(std::sqrt(r));
}

// f(x(theta)) x'(theta) on the positive component, with the edge factors cancelled.
double theta_measure(const EquilibriumMeasure& m, double theta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double len = m.b - m.sigma;
    const double x = m.sigma + len * s * s;
    const double alpha = m.alpha;
    const double sigma = m.sigma;
    const double b = m.b;
    switch (m.tag) {
        case CaseTag::HL1:
            return 2.0 * len * len * s * s * c * c / kPi * (1.0 + alpha / (std::sqrt(sigma * b) * x));
        case CaseTag::HL2:
            return len * c * c / kPi * (2.0 * x + b - sigma - 2.0 * alpha * std::sqrt(sigma / b) / x);
        case CaseTag::HL3:
            return len * c * c / kPi * (2.0 * x + b - sigma);
        case CaseTag::SYM1:
        case CaseTag::SYM2:
            return 2.0 * len * len * s * s * c * c / (kPi * x) * std::sqrt((b + x) * (x + sigma));
        case CaseTag::SYM3:
            return 2.0 * len * c * c / (kPi * x) * std::sqrt((b + x) / (x + sigma)) * (x * x - alpha * sigma / b);
        case CaseTag::SYM4:
            return 2.0 * len * x * c * c / kPi * std::sqrt((b + x) / (x + sigma));
    }
    return 0.0;
}

const GaussLegendreRule& graded_rule() { return gauss_legendre(30); }

// Panels graded geometrically towards both ends of [lo, hi]. Small-alpha measures have
// structure at x - sigma ~ alpha^2, i.e. theta ~ alpha, which uniform panels miss.
double graded_piece(const EquilibriumMeasure& m, const std::function<double(double)>& g, double lo, double hi) {
    if (hi <= lo) return 0.0;
    const double mid = 0.5 * (lo + hi);
    auto pts = graded_breakpoints(lo, mid, lo);
    const auto upper = graded_breakpoints(mid, hi, hi);
    pts.insert(pts.end(), upper.begin() + 1, upper.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] <= pts[i]) continue;
        sum += integrate_panel([&](double t) { return g(x_of_theta(m, t)) * theta_measure(m, t); }, pts[i],
                               pts[i + 1], graded_rule());
    }
    return sum;
}

// integral over theta in [lo, hi] of g(x(theta)) * theta_measure.
double theta_integral(const EquilibriumMeasure& m, const std::function<double(double)>& g, double lo, double hi) {
    return graded_piece(m, g, lo, hi);
}

// Same, split at a (near-)singular angle of g.
double theta_integral_graded(const EquilibriumMeasure& m, const std::function<double(double)>& g, double singular) {
    return graded_piece(m, g, 0.0, singular) + graded_piece(m, g, singular, kHalfPi);
}

double component_mass(const EquilibriumMeasure& m) {
    return theta_integral(m, [](double) { return 1.0; }, 0.0, kHalfPi);
}

double positive_part_integral(const EquilibriumMeasure& m, const std::function<double(double)>& g) {
    return theta_integral(m, g, 0.0, kHalfPi);
}

// Integral of g against the whole measure (both components when symmetric, g evaluated at +-x).
double measure_integral(const EquilibriumMeasure& m, const std::function<double(double)>& g) {
    if (!symmetric(m)) return positive_part_integral(m, g);
    return positive_part_integral(m, [&](double x) { return g(x) + g(-x); });
}

}  // namespace

Endpoints critical_sigma0_halfline(double alpha) {
    if (!(alpha > 0.0)) throw DomainError("critical sigma0 requires alpha > 0");
    const double beta = std::sqrt(1.0 + 2.0 * alpha + 4.0 * alpha * alpha);
    const double inner = 2.0 + 4.0 * alpha - 4.0 * alpha * alpha + 2.0 * (1.0 + alpha) * beta;
    const double s2 = 5.0 / 3.0 + 5.0 * alpha / 3.0 - beta / 3.0 - 2.0 / 3.0 * std::sqrt(inner);
    double sigma0 = std::sqrt(std::max(s2, 0.0));
    auto b_of = [alpha](double s) { return 2.0 / 3.0 * (std::sqrt(6.0 * (alpha + 1.0) - 2.0 * s * s) - 0.5 * s); };
    if (sigma0 < 1e-3) {
        // sigma0 ~ alpha^2 for small alpha and the closed form cancels; solve the active-constraint
        // condition (b + s)^2 s b = 4 alpha^2 in log form instead.
        auto h = [&](double s) {
            const double b = b_of(s);
            return 2.0 * std::log(b + s) + std::log(s * b) - 2.0 * std::log(2.0 * alpha);
        };
        const double big_b = 2.0 / 3.0 * std::sqrt(6.0 * (alpha + 1.0));
        const double lo = 2.0 * alpha * alpha / std::pow(big_b + 1.0, 3);
        boost::uintmax_t iterations = 200;
        const auto r = boost::math::tools::toms748_solve(h, lo, 1e-2, boost::math::tools::eps_tolerance<double>(52),
                                                         iterations);
        sigma0 = 0.5 * (r.first + r.second);
    }
    return {sigma0, b_of(sigma0)};
}

Endpoints critical_sigma0_symmetric(double alpha) {
    if (!(alpha > 0.0)) throw DomainError("critical sigma0 requires alpha > 0");
    const double root = std::sqrt(1.0 + 2.0 * alpha);
    const double b2 = 1.0 + alpha + root;
    // (1 + alpha)^2 - (1 + 2 alpha) = alpha^2, so sigma0^2 b0^2 = alpha^2 without cancellation.
    const double b0 = std::sqrt(b2);
    return {alpha / b0, b0};
}

double halfline_endpoint_equation(double alpha, double sigma, double b) {
    const double d = b - sigma;
    const double root = alpha != 0.0 ? 2.0 * alpha * std::sqrt(sigma / b) : 0.0;
    return 0.75 * d * d + sigma * d + root - 2.0 * alpha - 2.0;
}

double symmetric_endpoint_equation(double alpha, double sigma, double b) {
    return 0.5 * b * b + alpha * sigma / b - 0.5 * sigma * sigma - alpha - 1.0;
}

EquilibriumMeasure solve_endpoints(double alpha, double a, SupportKind kind) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be finite and >= 0");
    if (!std::isfinite(a)) throw DomainError("truncation point must be finite");
    if (alpha > 0.0 && a < 0.0) throw DomainError("alpha > 0 requires a >= 0");
    if (kind == SupportKind::SymmetricTruncated && a < 0.0) throw DomainError("symmetric support requires a >= 0");

    EquilibriumMeasure m;
    m.support_kind = kind;
    m.alpha = alpha;
    m.a = a;
    const double hi_offset = 10.0 * (1.0 + std::sqrt(alpha + 1.0));

    if (kind == SupportKind::HalfLine) {
        if (alpha == 0.0) {
            m.tag = CaseTag::HL3;
            m.sigma = std::max(a, -std::numbers::sqrt2);
            m.b = 2.0 / 3.0 * (std::sqrt(m.sigma * m.sigma + 6.0) + 0.5 * m.sigma);
            return m;
        }
        const auto crit = critical_sigma0_halfline(alpha);
        if (a <= crit.sigma) {
            m.tag = CaseTag::HL1;
            m.sigma = crit.sigma;
            m.b = crit.b;
            return m;
        }
        m.tag = CaseTag::HL2;
        m.sigma = a;
        const double s = a;
        m.b = solve_increasing([&](double b) { return halfline_endpoint_equation(alpha, s, b); },
                               [&](double b) { return 1.5 * (b - s) + s - alpha * std::sqrt(s) * std::pow(b, -1.5); },
                               s + 1e-9, s + hi_offset);
        const double constraint = m.b + s - 2.0 * alpha / std::sqrt(s * m.b);
        if (constraint < -1e-12) {
            std::ostringstream msg;
            msg << "HL2 constraint b + sigma - 2 alpha/sqrt(sigma b) >= 0 violated (" << constraint << ")";
            throw InfeasibleCase(msg.str());
        }
        return m;
    }

    if (alpha == 0.0) {
        m.tag = CaseTag::SYM4;
        m.sigma = a;
        m.b = std::sqrt(a * a + 2.0);
        return m;
    }
    const auto crit = critical_sigma0_symmetric(alpha);
    if (a <= crit.sigma) {
        m.tag = a == 0.0 ? CaseTag::SYM1 : CaseTag::SYM2;
        m.sigma = crit.sigma;
        m.b = crit.b;
        return m;
    }
    m.tag = CaseTag::SYM3;
    m.sigma = a;
    const double s = a;
    m.b = solve_increasing([&](double b) { return symmetric_endpoint_equation(alpha, s, b); },
                           [&](double b) { return b - alpha * s / (b * b); }, s + 1e-9, s + hi_offset);
    const double constraint = s * m.b - alpha;
    if (constraint < -1e-12) {
        std::ostringstream msg;
        msg << "SYM3 constraint sigma b - alpha >= 0 violated (" << constraint << ")";
        throw InfeasibleCase(msg.str());
    }
    return m;
}

double external_field(double alpha, double x) {
    if (alpha == 0.0) return x * x;
    return x * x - 2.0 * alpha * std::log(std::abs(x));
}

double density_eval(const EquilibriumMeasure& m, double x) {
    const double t = symmetric(m) ? std::abs(x) : x;
    const double tol = 1e-14 * std::max(1.0, std::abs(m.b));
    if (t < m.sigma - tol || t > m.b + tol) {
        std::ostringstream msg;
        msg << "x=" << x << " is outside the support of the " << to_string(m.tag) << " density";
        throw DomainError(msg.str());
    }
    if (t >= m.b) return 0.0;
    const double sigma = m.sigma;
    const double b = m.b;
    const double alpha = m.alpha;
    if (t <= sigma) {
        if (soft_left_edge(m)) return 0.0;
        double edge_factor = 0.0;
        switch (m.tag) {
            case CaseTag::HL2: edge_factor = b + sigma - 2.0 * alpha / std::sqrt(sigma * b); break;
            case CaseTag::HL3: edge_factor = b + sigma; break;
            case CaseTag::SYM3: edge_factor = sigma * b - alpha; break;
            case CaseTag::SYM4:
                if (sigma == 0.0) return std::sqrt(b * b) / kPi;
                edge_factor = 1.0;
                break;
            default: break;
        }
        return std::abs(edge_factor) <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    double f = 0.0;
    switch (m.tag) {
        case CaseTag::HL1:
            f = std::sqrt((b - t) * (t - sigma)) / kPi * (1.0 + alpha / (std::sqrt(sigma * b) * t));
            break;
        case CaseTag::HL2:
            f = std::sqrt((b - t) / (t - sigma)) / (2.0 * kPi) *
                (2.0 * t + b - sigma - 2.0 * alpha * std::sqrt(sigma / b) / t);
            break;
        case CaseTag::HL3: f = std::sqrt((b - t) / (t - sigma)) / (2.0 * kPi) * (2.0 * t + b - sigma); break;
        case CaseTag::SYM1:
        case CaseTag::SYM2: f = std::sqrt((b * b - t * t) * (t * t - sigma * sigma)) / (kPi * t); break;
        case CaseTag::SYM3:
            f = std::sqrt((b * b - t * t) / (t * t - sigma * sigma)) / (kPi * t) * (t * t - alpha * sigma / b);
            break;
        case CaseTag::SYM4:
            f = t / kPi * std::sqrt((b - t) * (b + t) / ((t - sigma) * (t + sigma)));
            break;
    }
    if (f < 0.0 && f > -1e-14) f = 0.0;
    return f;
}

double density_cdf(const EquilibriumMeasure& m, double x) {
    if (!symmetric(m)) {
        if (x <= m.sigma) return 0.0;
        if (x >= m.b) return component_mass(m);
        return theta_integral(m, [](double) { return 1.0; }, 0.0, theta_of_x(m, x));
    }
    const double half = component_mass(m);
    if (x <= -m.b) return 0.0;
    if (x >= m.b) return 2.0 * half;
    if (std::abs(x) <= m.sigma) return half;
    const double partial = theta_integral(m, [](double) { return 1.0; }, 0.0, theta_of_x(m, std::abs(x)));
    return x > 0.0 ? half + partial : half - partial;
}

double mass_error(const EquilibriumMeasure& m) {
    const double total = symmetric(m) ? 2.0 * component_mass(m) : component_mass(m);
    return std::abs(total - 1.0);
}

// log(1/|d|); the innermost graded panels can round a node onto the singular point,
// where the quadrature weight is negligible.
double log_kernel(double d) { return d == 0.0 ? 0.0 : -std::log(std::abs(d)); }

double log_potential(const EquilibriumMeasure& m, double x) {
    const double t = symmetric(m) ? std::abs(x) : x;
    double singular = 0.0;
    if (t >= m.b) singular = kHalfPi;
    else if (t > m.sigma) singular = theta_of_x(m, t);
    if (!symmetric(m)) {
        return theta_integral_graded(m, [&](double s) { return log_kernel(t - s); }, singular);
    }
    return theta_integral_graded(
        m, [&](double s) { return log_kernel(t - s) + log_kernel(t + s); }, singular);
}

RobinReport robin_constant(const EquilibriumMeasure& m) {
    RobinReport report;
    const double len = m.b - m.sigma;
    std::vector<double> interior;
    if (symmetric(m)) {
        for (int j = 0; j < 25; ++j) {
            const double x = m.sigma + len * (j + 1) / 26.0;
            interior.push_back(-x);
            interior.push_back(x);
        }
    } else {
        for (int j = 0; j < 50; ++j) interior.push_back(m.sigma + len * (j + 1) / 51.0);
    }
    std::vector<double> values;
    values.reserve(interior.size());
    for (double x : interior) values.push_back(log_potential(m, x) + 0.5 * external_field(m.alpha, x));
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    report.constant = mean;
    for (double v : values) report.max_deviation = std::max(report.max_deviation, std::abs(v - mean));

    constexpr double kEdge = 1e-3;
    double gap_lo = m.a;
    if (!symmetric(m) && m.a < 0.0 && m.alpha == 0.0) gap_lo = m.a;
    if (m.alpha > 0.0) gap_lo = std::max(gap_lo, kEdge);
    const double gap_hi = m.sigma - kEdge;
    std::vector<double> exterior;
    const bool has_gap = gap_hi > gap_lo;
    const int right_count = has_gap ? 10 : 20;
    if (has_gap) {
        for (int j = 0; j < 10; ++j) exterior.push_back(gap_lo + (gap_hi - gap_lo) * j / 9.0);
    }
    for (int j = 0; j < right_count; ++j) exterior.push_back(m.b + kEdge + (3.0 - kEdge) * j / (right_count - 1.0));
    report.exterior_points = static_cast<int>(exterior.size());
    report.min_exterior_slack = std::numeric_limits<double>::infinity();
    for (double x : exterior) {
        const double v = log_potential(m, x) + 0.5 * external_field(m.alpha, x);
        report.min_exterior_slack = std::min(report.min_exterior_slack, v - mean);
    }

    report.min_density = std::numeric_limits<double>::infinity();
    for (int j = 1; j < 200; ++j) {
        const double x = m.sigma + len * j / 200.0;
        report.min_density = std::min(report.min_density, density_eval(m, x));
    }
    return report;
}

double halfline_energy_closed_form(double sigma) {
    const double s2 = sigma * sigma;
    const double root = std::sqrt(6.0 + s2);
    return (81.0 + 72.0 * s2 - 2.0 * s2 * s2 + (30.0 * sigma + 2.0 * sigma * s2) * root -
            108.0 * std::log((root - sigma) / 6.0)) /
           108.0;
}

EquilibriumEnergy equilibrium_energy(const EquilibriumMeasure& m) {
    const auto robin = robin_constant(m);
    const double mean_q = measure_integral(m, [&](double x) { return external_field(m.alpha, x); });
    EquilibriumEnergy e;
    e.robin_constant = robin.constant;
    e.robin_deviation = robin.max_deviation;
    e.energy = robin.constant + 0.5 * mean_q;
    if (m.support_kind == SupportKind::HalfLine && m.alpha == 0.0) e.closed_form = halfline_energy_closed_form(m.sigma);
    return e;
}

std::vector<std::pair<double, double>> density_grid(const EquilibriumMeasure& m, int points) {
    if (points < 2) throw DomainError("density grid needs at least 2 points");
    std::vector<std::pair<double, double>> right;
    for (int j = 0; j < points; ++j) {
        const double theta = kHalfPi * j / (points - 1.0);
        const double x = j + 1 == points ? m.b : x_of_theta(m, theta);
        right.emplace_back(x, density_eval(m, x));
    }
    if (!symmetric(m)) return right;
    std::vector<std::pair<double, double>> grid;
    grid.reserve(2 * right.size());
    for (auto it = right.rbegin(); it != right.rend(); ++it) grid.emplace_back(-it->first, it->second);
    grid.insert(grid.end(), right.begin(), right.end());
    return grid;
}

std::string measure_json(const EquilibriumMeasure& m) {
    const auto energy = equilibrium_energy(m);
    io::JsonObject json;
    json.add("support", to_string(m.support_kind))
        .add("alpha", m.alpha)
        .add("a", m.a)
        .add("case", to_string(m.tag))
        .add("sigma", m.sigma)
        .add("b", m.b)
        .add("robin_constant", energy.robin_constant)
        .add("energy", energy.energy)
        .add("mass_error", mass_error(m));
    return json.str();
}

void write_density_csv(const std::vector<std::pair<double, double>>& grid, std::ostream& out) {
    out << "x,f\n";
    for (const auto& [x, f] : grid) out << io::format_number(x) << ',' << io::format_number(f) << '\n';
}

}  // namespace ghermite
