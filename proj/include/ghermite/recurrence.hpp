#pragma once

#include "ghermite/weights.hpp"

#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace ghermite {

namespace detail {
// Lazily filled, x-independent integrals keyed by degree (see polynomials.cpp).
struct DegreeCache {
    std::mutex mutex;
    std::vector<std::optional<double>> values;
};
}  // namespace detail

/// Orthonormal three-term recurrence
///     x H_k = a_{k+1} H_{k+1} + b_k H_k + a_k H_{k-1},   H_0 = 1, a_0 = 0,
/// for a truncated weight, together with the boundary data H_k(a) and
/// m_k = H_k(a)^2 w_lambda(a). A built table is immutable.
class RecurrenceTable {
public:
    RecurrenceTable(WeightSpec spec, std::vector<double> diag, std::vector<double> offdiag);

    const WeightSpec& spec() const { return spec_; }
    int max_degree() const { return static_cast<int>(diag_.size()); }

    /// b_k, 0 <= k < N.
    double diag(int k) const { return diag_.at(k); }
    /// a_k, 0 <= k <= N (a_0 = 0).
    double offdiag(int k) const { return offdiag_.at(k); }
    const std::vector<double>& diag() const { return diag_; }
    /// Indexed from 0; entry 0 is the conventional a_0 = 0.
    const std::vector<double>& offdiag() const { return offdiag_; }

    double normalization() const { return spec_.normalization(); }
    double weight_at_boundary() const { return weight_at_boundary_; }
    /// H_k(a), signed.
    double boundary_value(int k) const { return boundary_value_.at(k); }
    /// m_k = H_k(a)^2 w_lambda(a).
    double boundary_mass(int k) const;

    detail::DegreeCache& reciprocal_moment_cache() const { return *cache_; }

private:
    WeightSpec spec_;
    std::vector<double> diag_;
    std::vector<double> offdiag_;
    double weight_at_boundary_ = 0.0;
    std::vector<double> boundary_value_;
    std::shared_ptr<detail::DegreeCache> cache_;
};

/// Discretized Stieltjes procedure (Lanczos with full reorthogonalization) on one
/// frozen quadrature grid exact for degree 2N + 2. Throws PrecisionExhausted when a
/// residual norm vanishes.
RecurrenceTable build_table(const WeightSpec& spec, int max_degree, const QuadratureScheme& scheme = {});

/// m_n = H_n(a)^2 w_lambda(a); range-checked.
double boundary_mass(const RecurrenceTable& table, int n);

/// |LHS - RHS| of the moment identity
///   half line:  a_{n+1}^2 + a_n^2 + b_n^2 = n + lambda + 1/2 + (a/2) m_n
///   symmetric:  a_n^2 + a_{n+1}^2         = n + lambda + 1/2 + a m_n
/// for 1 <= n <= N-1.
double identity_residual(const RecurrenceTable& table, int n);

/// CSV with header `k,diag,offdiag,boundary_mass`; row k carries b_k, a_{k+1}, m_k.
void write_table_csv(const RecurrenceTable& table, std::ostream& out);

/// Rebuilds a table from `write_table_csv` output; the weight spec is not stored in
/// the CSV and must be supplied.
RecurrenceTable read_table_csv(std::istream& in, const WeightSpec& spec);

}  // namespace ghermite
