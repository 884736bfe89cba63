#include "ghermite/energy.hpp"

#include "ghermite/equilibrium.hpp"
#include "ghermite/errors.hpp"
#include "ghermite/io.hpp"
#include "ghermite/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace ghermite {

ExternalField::ExternalField(const RecurrenceTable& table, int n, FieldForm form)
    : n_(n), lambda_(table.spec().lambda()), log_c_(std::log(table.normalization())), support_(table.spec().support()) {
    if (n < 1 || n > table.max_degree() - 1) throw std::out_of_range("ExternalField: need 1 <= n <= N-1");
    if (support_.kind == SupportKind::HalfLine && support_.a < 0.0 && lambda_ != 0.0)
        throw DomainError("a < 0 on the half line requires lambda = 0");
    m_ = table.boundary_mass(n);
    if (m_ < 0.0) throw TableInconsistency("negative boundary mass");
    if (support_.kind == SupportKind::HalfLine) {
        if (form == FieldForm::Uncorrected) c_ = 2.0 * table.diag(n);
        else if (lambda_ != 0.0) c_ = 2.0 * table.diag(n) - m_;
    }
}

ExternalField::G ExternalField::g(double x) const {
    const double a = support_.a;
    if (support_.kind == SupportKind::HalfLine) {
        const double xa = x - a;
        if (xa == 0.0 || (c_ != 0.0 && x == 0.0)) {
            std::ostringstream msg;
            msg << "external field has a pole at x=" << x;
            throw FieldSingularity(msg.str());
        }
        G out{2.0 + m_ / xa, -m_ / (xa * xa), 2.0 * m_ / (xa * xa * xa)};
        if (c_ != 0.0) {
            out.g += c_ / x;
            out.dg -= c_ / (x * x);
            out.d2g += 2.0 * c_ / (x * x * x);
        }
        return out;
    }
    const double d = x * x - a * a;
    if (a * m_ == 0.0) return {2.0, 0.0, 0.0};
    if (d == 0.0) {
        std::ostringstream msg;
        msg << "external field has a pole at x=" << x;
        throw FieldSingularity(msg.str());
    }
    const double k = 2.0 * a * m_;
    return {2.0 + k / d, -2.0 * k * x / (d * d), 2.0 * k * (3.0 * x * x + a * a) / (d * d * d)};
}

double ExternalField::short_range(double x) const {
    const double v = g(x).g;
    if (!(v > 0.0)) {
        std::ostringstream msg;
        msg << "short-range field argument " << v << " is not positive at x=" << x;
        throw FieldSingularity(msg.str());
    }
    return std::log(v);
}

double ExternalField::operator()(double x) const {
    double v = x * x + log_c_ + short_range(x);
    if (lambda_ != 0.0) {
        if (x == 0.0 || (support_.kind == SupportKind::HalfLine && x < 0.0))
            throw FieldSingularity("the 2 lambda log(1/x) term is undefined at x <= 0");
        v -= 2.0 * lambda_ * std::log(std::abs(x));
    }
    return v;
}

double ExternalField::derivative(double x) const {
    const auto s = g(x);
    double v = 2.0 * x + s.dg / s.g;
    if (lambda_ != 0.0) v -= 2.0 * lambda_ / x;
    return v;
}

double ExternalField::second_derivative(double x) const {
    const auto s = g(x);
    const double r = s.dg / s.g;
    double v = 2.0 + s.d2g / s.g - r * r;
    if (lambda_ != 0.0) v += 2.0 * lambda_ / (x * x);
    return v;
}

namespace {

// 2 sum_{i<j} log(1/|x_i - x_j|) over a sorted copy.
double pair_energy(std::vector<double> points) {
    std::sort(points.begin(), points.end());
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i] > points[i - 1])) {
            std::ostringstream msg;
            msg << "coincident points at x=" << points[i];
            throw SingularConfiguration(msg.str());
        }
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) sum -= std::log(points[j] - points[i]);
    return 2.0 * sum;
}

EnergyReport report_at_zeros(const RecurrenceTable& table, int n, double limit, FieldForm form) {
    const ExternalField field(table, n, form);
    const auto zs = compute_zeros(table, n);
    const auto energy = total_energy(zs.zeros, field);
    const double nn = n;
    const double lambda = table.spec().lambda();
    const double log_n = std::log(nn);

    EnergyReport r;
    r.n = n;
    r.lambda_n = lambda;
    r.E_star_n = energy.E;
    r.diagnostic = (energy.E + (nn * lambda + nn * (nn - 1.0) / 2.0) * log_n) / (nn * nn);

    // V(sqrt(n) s) = n V_n(s) - lambda log n + log C, with
    // V_n(s) = s^2 + 2 (lambda/n) log(1/|s|) + (1/n) log g_n(sqrt(n) s).
    const double root = std::sqrt(nn);
    const double alpha_n = lambda / nn;
    const auto s = zs.rescaled();
    double field_sum = 0.0;
    for (double si : s) {
        double vn = si * si + field.short_range(root * si) / nn;
        if (lambda != 0.0) vn -= 2.0 * alpha_n * std::log(std::abs(si));
        field_sum += vn;
    }
    r.diagnostic_rescaled = (pair_energy(s) + nn * field_sum) / (nn * nn);
    r.limit = limit;
    r.gap = std::abs(r.diagnostic - r.limit);
    return r;
}

}  // namespace

ConfigurationEnergy total_energy(const std::vector<double>& points, const ExternalField& field) {
    ConfigurationEnergy out;
    out.F = pair_energy(points);
    for (double x : points) out.F += field(x);
    out.E = out.F - static_cast<double>(points.size()) * field.log_normalization();
    return out;
}

EnergyReport energy_at_zeros(const RecurrenceTable& table, int n, std::optional<double> limit_a, FieldForm form) {
    const double alpha = table.spec().lambda() / n;
    const auto measure = solve_endpoints(alpha, limit_a.value_or(table.spec().a()), table.spec().kind());
    return report_at_zeros(table, n, equilibrium_energy(measure).energy, form);
}

std::vector<EnergyReport> convergence_sweep(SupportKind kind, double alpha, double limit_a,
                                            const std::vector<int>& n_list, const QuadratureScheme& scheme) {
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1) throw DomainError("sweep degrees must be positive");
        if (i > 0 && n_list[i] <= n_list[i - 1]) throw DomainError("sweep degrees must be increasing");
    }
    const double limit = equilibrium_energy(solve_endpoints(alpha, limit_a, kind)).energy;
    std::vector<EnergyReport> reports;
    for (int n : n_list) {
        const double lambda_n = std::round(alpha * n);
        const double a = limit_a * std::sqrt(static_cast<double>(n));
        const Support support = kind == SupportKind::HalfLine ? Support::half_line(a) : Support::symmetric(a);
        const auto table = build_table(WeightSpec(lambda_n, support), n + 1, scheme);
        reports.push_back(report_at_zeros(table, n, limit, FieldForm::Derived));
    }
    return reports;
}

void write_sweep_csv(const std::vector<EnergyReport>& reports, std::ostream& out) {
    out << "n,lambda_n,E_star_n,diagnostic,limit,gap\n";
    for (const auto& r : reports) {
        out << r.n << ',' << io::format_number(r.lambda_n) << ',' << io::format_number(r.E_star_n) << ','
            << io::format_number(r.diagnostic) << ',' << io::format_number(r.limit) << ','
            << io::format_number(r.gap) << '\n';
    }
}

namespace {

// Which side of each singular point of V the coordinate lies on; a step may not change it.
int region(const ExternalField& field, double x) {
    const double a = field.support().a;
    int code = x > 0.0 ? 1 : 0;
    code |= (x > a ? 2 : 0);
    code |= (x > -a ? 4 : 0);
    return code;
}

// Solves H p = g in place by Cholesky; false when H is not positive definite.
bool cholesky_solve(std::vector<double> h, std::vector<double>& rhs, int n) {
    for (int j = 0; j < n; ++j) {
        double d = h[j * n + j];
        for (int k = 0; k < j; ++k) d -= h[j * n + k] * h[j * n + k];
        if (!(d > 0.0)) return false;
        d = std::sqrt(d);
        h[j * n + j] = d;
        for (int i = j + 1; i < n; ++i) {
            double s = h[i * n + j];
            for (int k = 0; k < j; ++k) s -= h[i * n + k] * h[j * n + k];
            h[i * n + j] = s / d;
        }
    }
    for (int i = 0; i < n; ++i) {
        double s = rhs[i];
        for (int k = 0; k < i; ++k) s -= h[i * n + k] * rhs[k];
        rhs[i] = s / h[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = rhs[i];
        for (int k = i + 1; k < n; ++k) s -= h[k * n + i] * rhs[k];
        rhs[i] = s / h[i * n + i];
    }
    return true;
}

}  // namespace

MinimizationResult minimize_configuration(const ExternalField& field, std::vector<double> start, int max_iterations) {
    const int n = static_cast<int>(start.size());
    if (n < 1 || n > 8) throw DomainError("minimize_configuration handles 1 <= n <= 8 points");
    for (int i = 1; i < n; ++i)
        if (!(start[i] > start[i - 1])) throw SingularConfiguration("start must be strictly increasing");

    MinimizationResult res;
    res.points = std::move(start);
    res.F = total_energy(res.points, field).F;
    std::vector<int> regions(n);
    for (int i = 0; i < n; ++i) regions[i] = region(field, res.points[i]);

    auto admissible = [&](const std::vector<double>& x) {
        for (int i = 0; i < n; ++i) {
            if (region(field, x[i]) != regions[i]) return false;
            if (i > 0 && !(x[i] > x[i - 1])) return false;
        }
        return true;
    };

    std::vector<double> grad(n), hess(n * n);
    for (res.iterations = 0; res.iterations < max_iterations; ++res.iterations) {
        const auto& x = res.points;
        std::fill(hess.begin(), hess.end(), 0.0);
        for (int i = 0; i < n; ++i) {
            grad[i] = field.derivative(x[i]);
            hess[i * n + i] = field.second_derivative(x[i]);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double d = x[i] - x[j];
                grad[i] -= 2.0 / d;
                hess[i * n + i] += 2.0 / (d * d);
                hess[i * n + j] = -2.0 / (d * d);
            }
        }
        double gnorm = 0.0;
        for (double v : grad) gnorm = std::max(gnorm, std::abs(v));
        res.gradient_norm = gnorm;
        if (gnorm < 1e-12) break;

        std::vector<double> step = grad;
        if (!cholesky_solve(hess, step, n)) step = grad;

        double t = 1.0;
        bool moved = false;
        for (int k = 0; k < 60; ++k, t *= 0.5) {
            std::vector<double> trial(n);
            for (int i = 0; i < n; ++i) trial[i] = x[i] - t * step[i];
            if (!admissible(trial)) continue;
            double f;
            try {
                f = total_energy(trial, field).F;
            } catch (const NumericalError&) {
                continue;
            }
            if (f <= res.F) {
                res.points = std::move(trial);
                res.F = f;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    return res;
}

}  // namespace ghermite
