#include "ghermite/polynomials.hpp"

#include "ghermite/errors.hpp"

#include <cmath>
#include <sstream>

namespace ghermite {

PolyJet eval_jet(const RecurrenceTable& table, int n, double x) {
    if (n < 0 || n > table.max_degree()) throw std::out_of_range("eval_poly: degree out of range");
    PolyJet jet;
    double h = 1.0, dh = 0.0, d2h = 0.0;
    double hp = 0.0, dhp = 0.0, d2hp = 0.0;
    for (int k = 0; k < n; ++k) {
        const double ak = table.offdiag(k);
        const double ak1 = table.offdiag(k + 1);
        const double t = x - table.diag(k);
        const double hn = (t * h - ak * hp) / ak1;
        const double dhn = (h + t * dh - ak * dhp) / ak1;
        const double d2hn = (2.0 * dh + t * d2h - ak * d2hp) / ak1;
        hp = h;
        dhp = dh;
        d2hp = d2h;
        h = hn;
        dh = dhn;
        d2h = d2hn;
    }
    if (!std::isfinite(h) || !std::isfinite(dh) || !std::isfinite(d2h)) {
        std::ostringstream msg;
        msg << "forward recurrence overflow evaluating H_" << n << " at x=" << x << "; rescale the argument";
        throw ScaledEvaluationError(msg.str());
    }
    jet.value = h;
    jet.d1 = dh;
    jet.d2 = d2h;
    jet.prev_value = hp;
    jet.prev_d1 = dhp;
    return jet;
}

PolyValue eval_poly(const RecurrenceTable& table, int n, double x) {
    const auto jet = eval_jet(table, n, x);
    return {jet.value, jet.d1};
}

double reciprocal_moment(const RecurrenceTable& table, int n) {
    if (table.spec().kind() != SupportKind::SymmetricTruncated)
        throw DomainError("reciprocal moment is defined for the symmetric support only");
    if (n < 1 || n > table.max_degree()) throw std::out_of_range("reciprocal_moment: degree out of range");
    auto& cache = table.reciprocal_moment_cache();
    {
        std::lock_guard lock(cache.mutex);
        if (static_cast<int>(cache.values.size()) > n && cache.values[n]) return *cache.values[n];
    }
    QuadratureScheme scheme;
    scheme.relative_tolerance = 1e-13;
    const double value = integrate(
        [&](double y) {
            const auto jet = eval_jet(table, n, y);
            return jet.value * jet.prev_value / y;
        },
        table.spec(), scheme);
    std::lock_guard lock(cache.mutex);
    if (static_cast<int>(cache.values.size()) <= n) cache.values.resize(n + 1);
    cache.values[n] = value;
    return value;
}

namespace {

void check_pole(double x, double pole) {
    if (std::abs(x - pole) <= 1e-13 * std::max(1.0, std::abs(pole))) {
        std::ostringstream msg;
        msg << "ladder coefficients have a pole at x=" << pole;
        throw PoleError(msg.str());
    }
}

// A_k / a_k and its x-derivative.
struct ReducedA {
    double value;
    double derivative;
};

ReducedA reduced_a(const RecurrenceTable& table, int k, double x, LadderForm form) {
    const double a = table.spec().a();
    const double m = table.boundary_mass(k);
    if (table.spec().kind() == SupportKind::HalfLine) {
        double c = 0.0;
        if (form == LadderForm::Uncorrected) {
            c = 2.0 * table.diag(k);
        } else if (table.spec().lambda() != 0.0) {
            // 2 lambda <H_k^2 / y> = 2 b_k - m_k
            c = 2.0 * table.diag(k) - m;
        }
        const double xa = x - a;
        return {2.0 + c / x + m / xa, -c / (x * x) - m / (xa * xa)};
    }
    const double d = x * x - a * a;
    return {2.0 * (1.0 + a * m / d), -4.0 * a * m * x / (d * d)};
}

struct Ladder {
    double A, dA, B, dB;
};

Ladder ladder(const RecurrenceTable& table, int n, double x, LadderForm form) {
    const double lambda = table.spec().lambda();
    const double a = table.spec().a();
    const double an = table.offdiag(n);
    const double h = table.weight_at_boundary() * table.boundary_value(n) * table.boundary_value(n - 1);
    const auto ra = reduced_a(table, n, x, form);
    Ladder l{an * ra.value, an * ra.derivative, 0.0, 0.0};
    if (table.spec().kind() == SupportKind::HalfLine) {
        const double xa = x - a;
        double d = 2.0 * an * an - n - an * h;
        if (form == LadderForm::Derived && lambda == 0.0) d = 0.0;  // equals 2 lambda a_n <H_n H_{n-1}/y>
        l.B = an * h / xa + d / x;
        l.dB = -an * h / (xa * xa) - d / (x * x);
    } else {
        const double dd = x * x - a * a;
        const double c = (form == LadderForm::Derived ? 2.0 : -2.0) * an * h;
        const double e = lambda != 0.0 ? 2.0 * lambda * an * reciprocal_moment(table, n) : 0.0;
        l.B = c * x / dd + e / x;
        l.dB = -c * (x * x + a * a) / (dd * dd) - e / (x * x);
    }
    return l;
}

void check_ode_domain(const RecurrenceTable& table, int n, double x) {
    if (n < 1 || n > table.max_degree() - 1) throw std::out_of_range("ode_coefficients: need 1 <= n <= N-1");
    const double a = table.spec().a();
    check_pole(x, 0.0);
    check_pole(x, a);
    if (table.spec().kind() == SupportKind::SymmetricTruncated) check_pole(x, -a);
}

}  // namespace

OdeCoefficients ode_coefficients(const RecurrenceTable& table, int n, double x, LadderForm form) {
    check_ode_domain(table, n, x);
    const double lambda = table.spec().lambda();
    const auto l = ladder(table, n, x, form);
    if (l.A == 0.0) throw PoleError("A_n vanishes; R_n and S_n are undefined there");
    const double vprime = 2.0 * x - 2.0 * lambda / x;
    const double ratio = l.dA / l.A;
    OdeCoefficients c;
    c.A = l.A;
    c.B = l.B;
    c.R = -vprime - ratio;
    c.S = l.dB - l.B * ratio - l.B * (vprime + l.B) +
          table.offdiag(n) * reduced_a(table, n - 1, x, form).value * l.A;
    return c;
}

double ladder_residual(const RecurrenceTable& table, int n, double x, LadderForm form) {
    const auto c = ode_coefficients(table, n, x, form);
    const auto jet = eval_jet(table, n, x);
    const double t1 = jet.d1;
    const double t2 = c.A * jet.prev_value;
    const double t3 = c.B * jet.value;
    const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), 1.0});
    return std::abs(t1 - t2 + t3) / scale;
}

double ode_residual(const RecurrenceTable& table, int n, double x, LadderForm form) {
    const auto c = ode_coefficients(table, n, x, form);
    const auto jet = eval_jet(table, n, x);
    const double t1 = jet.d2;
    const double t2 = c.R * jet.d1;
    const double t3 = c.S * jet.value;
    const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), 1.0});
    return std::abs(t1 + t2 + t3) / scale;
}

}  // namespace ghermite
