#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ghermite {

enum class SupportKind { HalfLine, SymmetricTruncated };

std::string to_string(SupportKind kind);

/// Truncated support: [a, +inf) or (-inf, -a] U [a, +inf).
struct Support {
    SupportKind kind = SupportKind::HalfLine;
    double a = 0.0;

    static Support half_line(double a) { return {SupportKind::HalfLine, a}; }
    static Support symmetric(double a) { return {SupportKind::SymmetricTruncated, a}; }

    bool contains(double x) const;
    bool in_interior(double x) const;
};

/// Normalized weight |x|^{2 lambda} e^{-x^2} / C_lambda restricted to a Support.
class WeightSpec {
public:
    /// Throws DomainError when lambda <= -1/2, when a symmetric truncation has a < 0,
    /// or when lambda > 0 would put the origin inside a half-line support.
    WeightSpec(double lambda, Support support);

    double lambda() const { return lambda_; }
    const Support& support() const { return support_; }
    SupportKind kind() const { return support_.kind; }
    double a() const { return support_.a; }
    /// C_lambda, integral of the unnormalized weight over the support.
    double normalization() const { return normalization_; }

    /// log w_lambda(x) including the normalization; -inf where the weight vanishes.
    double log_density(double x) const;
    double density(double x) const;

private:
    double lambda_;
    Support support_;
    double normalization_;
};

struct QuadratureScheme {
    int panel_nodes = 40;
    /// Upper panel edge T; 0 selects max(a,0) + sqrt(lambda) + sqrt(log(1/tol)) + margin.
    double tail_cutoff = 0.0;
    double relative_tolerance = 1e-12;
    int max_doublings = 12;
    /// Widest panel before refinement.
    double max_panel_width = 0.5;

    void validate() const;
};

/// Integral of |x|^{2 lambda} e^{-x^2} over the support; analytic via incomplete gamma.
double normalization_constant(double lambda, const Support& support);

/// Mass of the normalized weight beyond |x| = cutoff on each unbounded end.
double tail_mass(const WeightSpec& spec, double cutoff);

/// Integral of f * w_lambda over the support. Panels are halved until two successive
/// estimates agree to the scheme tolerance (relative to the integral of |f| w);
/// a certified tail remainder f(T) * tail_mass(T) is added on each unbounded end.
double integrate(const std::function<double(double)>& f, const WeightSpec& spec,
                 const QuadratureScheme& scheme = {});

/// Fixed discrete measure sum_i weights[i] delta(nodes[i]) approximating w_lambda,
/// exact (to rounding) for polynomials of degree <= `degree`. Nodes are sorted.
struct Discretization {
    std::vector<double> nodes;
    std::vector<double> weights;
};

Discretization discretize(const WeightSpec& spec, int degree, const QuadratureScheme& scheme = {},
                          int refinement = 0);

}  // namespace ghermite
