#pragma once

#include "ghermite/recurrence.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace ghermite {

/// Zeros of H_n (strictly increasing) and the factor used to rescale them.
struct ZeroSet {
    int n = 0;
    std::vector<double> zeros;
    double scale = 1.0;
    WeightSpec spec;
    /// |x_newton - x_eigen| per zero.
    std::vector<double> polish_shifts;

    std::vector<double> rescaled() const;
};

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with the given diagonal
/// and sub-diagonal (size diag.size() - 1), by implicit-shift QL. Throws NumericalError
/// when an eigenvalue needs more than 50 sweeps.
std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag, std::span<const double> subdiag);

/// Jacobi-matrix eigenvalues followed by one Newton step on H_n. `scale` defaults to sqrt(n).
/// On a symmetric support with odd n the central zero sits at the origin, inside the gap
/// (-a, a); every other zero must lie in the support interior.
ZeroSet compute_zeros(const RecurrenceTable& table, int n, std::optional<double> scale = std::nullopt);

/// Right-continuous step function of (1/n) sum delta(x_i / scale).
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> points);
    double operator()(double t) const;
    /// Sorted jump locations; the jump at each is 1/n.
    const std::vector<double>& jumps() const { return jumps_; }
    std::size_t size() const { return jumps_.size(); }

private:
    std::vector<double> jumps_;
};

EmpiricalCdf empirical_cdf(const ZeroSet& zeros);

/// sup_t |F_emp(t) - cdf(t)| evaluated at every jump with both one-sided limits.
double ks_distance(const EmpiricalCdf& emp, const std::function<double(double)>& cdf);

/// CSV with header `i,zero,rescaled`.
void write_zeros_csv(const ZeroSet& zeros, std::ostream& out);

}  // namespace ghermite
