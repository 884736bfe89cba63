#include "ghermite/zeros.hpp"

#include "ghermite/errors.hpp"
#include "ghermite/io.hpp"
#include "ghermite/polynomials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace ghermite {

std::vector<double> ZeroSet::rescaled() const {
    std::vector<double> out(zeros.size());
    for (std::size_t i = 0; i < zeros.size(); ++i) out[i] = zeros[i] / scale;
    return out;
}

std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag, std::span<const double> subdiag) {
    const int n = static_cast<int>(diag.size());
    if (n == 0) return {};
    if (static_cast<int>(subdiag.size()) != n - 1)
        throw DomainError("tridiagonal_eigenvalues: sub-diagonal must have n-1 entries");
    std::vector<double> d(diag.begin(), diag.end());
    std::vector<double> e(n, 0.0);
    std::copy(subdiag.begin(), subdiag.end(), e.begin());

    // Implicit QL with Wilkinson-type shifts (tql1).
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (++iter > 50) {
                    std::ostringstream msg;
                    msg << "implicit QL did not converge for eigenvalue " << l << " within 50 sweeps";
                    throw NumericalError(msg.str());
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

ZeroSet compute_zeros(const RecurrenceTable& table, int n, std::optional<double> scale) {
    if (n < 1 || n > table.max_degree()) throw std::out_of_range("compute_zeros: need 1 <= n <= N");
    std::vector<double> sub(table.offdiag().begin() + 1, table.offdiag().begin() + n);
    auto eig = tridiagonal_eigenvalues(std::span(table.diag()).first(n), sub);

    ZeroSet zs{n, {}, scale.value_or(std::sqrt(static_cast<double>(n))), table.spec(), {}};
    if (!(zs.scale > 0.0)) throw DomainError("rescaling factor must be positive");
    zs.zeros.resize(n);
    zs.polish_shifts.resize(n);
    for (int i = 0; i < n; ++i) {
        const auto p = eval_poly(table, n, eig[i]);
        double x = eig[i];
        if (p.derivative != 0.0) {
            const double step = p.value / p.derivative;
            // Only polish: a Newton step larger than the gap to a neighbour is rejected.
            double gap = std::numeric_limits<double>::infinity();
            if (i > 0) gap = std::min(gap, eig[i] - eig[i - 1]);
            if (i + 1 < n) gap = std::min(gap, eig[i + 1] - eig[i]);
            if (std::abs(step) < 0.25 * gap) x -= step;
        }
        zs.zeros[i] = x;
        zs.polish_shifts[i] = std::abs(x - eig[i]);
    }
    std::sort(zs.zeros.begin(), zs.zeros.end());

    const auto& support = table.spec().support();
    if (support.kind == SupportKind::SymmetricTruncated) {
        for (int i = 0; i < n / 2; ++i) {
            const double r = 0.5 * (zs.zeros[n - 1 - i] - zs.zeros[i]);
            zs.zeros[i] = -r;
            zs.zeros[n - 1 - i] = r;
        }
        if (n % 2 == 1) zs.zeros[n / 2] = 0.0;
    }

    for (int i = 0; i < n; ++i) {
        const double x = zs.zeros[i];
        if (i > 0 && !(x > zs.zeros[i - 1])) throw TableInconsistency("zeros are not simple");
        const bool central = support.kind == SupportKind::SymmetricTruncated && n % 2 == 1 && i == n / 2;
        if (central) continue;
        const double outside = support.kind == SupportKind::HalfLine ? support.a - x : support.a - std::abs(x);
        if (outside > 1e-8) {
            std::ostringstream msg;
            msg << "zero " << x << " of H_" << n << " lies outside the support by " << outside;
            throw TableInconsistency(msg.str());
        }
    }
    return zs;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> points) : jumps_(std::move(points)) {
    std::sort(jumps_.begin(), jumps_.end());
}

double EmpiricalCdf::operator()(double t) const {
    if (jumps_.empty()) return 0.0;
    const auto it = std::upper_bound(jumps_.begin(), jumps_.end(), t);
    return static_cast<double>(it - jumps_.begin()) / static_cast<double>(jumps_.size());
}

EmpiricalCdf empirical_cdf(const ZeroSet& zeros) { return EmpiricalCdf(zeros.rescaled()); }

double ks_distance(const EmpiricalCdf& emp, const std::function<double(double)>& cdf) {
    const auto& jumps = emp.jumps();
    const double n = static_cast<double>(jumps.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < jumps.size(); ++i) {
        const double f = cdf(jumps[i]);
        // Ties: the left limit is taken before the first and the right limit after the last coincident point.
        std::size_t first = i;
        while (first > 0 && jumps[first - 1] == jumps[i]) --first;
        std::size_t last = i;
        while (last + 1 < jumps.size() && jumps[last + 1] == jumps[i]) ++last;
        const double left = static_cast<double>(first) / n;
        const double right = static_cast<double>(last + 1) / n;
        worst = std::max({worst, std::abs(left - f), std::abs(right - f)});
    }
    return worst;
}

void write_zeros_csv(const ZeroSet& zeros, std::ostream& out) {
    out << "i,zero,rescaled\n";
    for (int i = 0; i < zeros.n; ++i) {
        out << i << ',' << io::format_number(zeros.zeros[i]) << ',' << io::format_number(zeros.zeros[i] / zeros.scale)
            << '\n';
    }
}

}  // namespace ghermite
