#pragma once

#include "ghermite/weights.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ghermite {

/// Which closed form describes the limit density.
///   HL1  half line, alpha > 0, a <= sigma0(alpha): soft edges at sigma0 and b
///   HL2  half line, alpha > 0, a > sigma0(alpha): hard edge at sigma = a
///   HL3  half line, alpha = 0: hard edge at sigma = max(a, -sqrt 2)
///   SYM1 symmetric, alpha > 0, a = 0
///   SYM2 symmetric, alpha > 0, 0 < a <= sigma0(alpha): same density as SYM1
///   SYM3 symmetric, alpha > 0, a > sigma0(alpha): hard edges at +-a
///   SYM4 symmetric, alpha = 0: hard edges at +-a (semicircle when a = 0)
enum class CaseTag { HL1, HL2, HL3, SYM1, SYM2, SYM3, SYM4 };

std::string to_string(CaseTag tag);

/// Equilibrium measure of Q_alpha(x) = x^2 + 2 alpha log(1/|x|) on a truncated support.
/// Its density lives on [sigma, b] (half line) or [-b, -sigma] U [sigma, b].
struct EquilibriumMeasure {
    SupportKind support_kind = SupportKind::HalfLine;
    double alpha = 0.0;
    double a = 0.0;
    CaseTag tag = CaseTag::HL3;
    double sigma = 0.0;
    double b = 0.0;
};

struct Endpoints {
    double sigma;
    double b;
};

/// sigma0(alpha) and b(alpha) of the detached half-line case, alpha > 0.
Endpoints critical_sigma0_halfline(double alpha);

/// sigma0 = sqrt(1 + alpha - sqrt(1 + 2 alpha)), b0 = sqrt(1 + alpha + sqrt(1 + 2 alpha)), alpha > 0.
Endpoints critical_sigma0_symmetric(double alpha);

/// 3/4 (b - s)^2 + s (b - s) + 2 alpha sqrt(s/b) - 2 alpha - 2
double halfline_endpoint_equation(double alpha, double sigma, double b);
/// b^2/2 + alpha s / b - s^2/2 - alpha - 1
double symmetric_endpoint_equation(double alpha, double sigma, double b);

/// Dispatches to the case whose constraints are feasible; throws InfeasibleCase when
/// the endpoint equation has no admissible root and DomainError on invalid (alpha, a).
EquilibriumMeasure solve_endpoints(double alpha, double a, SupportKind kind);

/// Q_alpha(x).
double external_field(double alpha, double x);

/// Closed-form density; 0 at soft edges, +inf at active hard edges. DomainError outside
/// the closed support.
double density_eval(const EquilibriumMeasure& m, double x);

/// Distribution function of the measure.
double density_cdf(const EquilibriumMeasure& m, double x);

/// |cdf(+inf) - 1| as integrated (the closed forms are not renormalized).
double mass_error(const EquilibriumMeasure& m);

/// U(x) = integral of log(1/|x - t|) against the density.
double log_potential(const EquilibriumMeasure& m, double x);

struct RobinReport {
    /// Mean of U + Q/2 over the interior grid.
    double constant = 0.0;
    double max_deviation = 0.0;
    /// min over the exterior points of U + Q/2 - constant; should be >= 0.
    double min_exterior_slack = 0.0;
    int exterior_points = 0;
    /// Smallest density value on an interior grid; negative flags an infeasible constraint.
    double min_density = 0.0;
};

/// Variational check: U + Q/2 on 50 interior points of the support and on 20 points of
/// the truncated domain outside it (1e-3 away from the endpoints).
RobinReport robin_constant(const EquilibriumMeasure& m);

struct EquilibriumEnergy {
    /// C + (1/2) integral Q dmu
    double energy = 0.0;
    double robin_constant = 0.0;
    double robin_deviation = 0.0;
    /// Closed form for the half line with alpha = 0, evaluated at sigma.
    std::optional<double> closed_form;
};

EquilibriumEnergy equilibrium_energy(const EquilibriumMeasure& m);

/// Energy of the alpha = 0 half-line measure with hard edge sigma >= -sqrt 2:
/// (81 + 72 s^2 - 2 s^4 + (30 s + 2 s^3) sqrt(6 + s^2) - 108 log((-s + sqrt(6 + s^2))/6)) / 108.
double halfline_energy_closed_form(double sigma);

/// (x, f(x)) on `points` nodes per support component, clustered towards the edges.
std::vector<std::pair<double, double>> density_grid(const EquilibriumMeasure& m, int points);

/// Flat JSON: support, alpha, a, case, sigma, b, robin_constant, energy, mass_error.
std::string measure_json(const EquilibriumMeasure& m);

/// CSV with header `x,f`.
void write_density_csv(const std::vector<std::pair<double, double>>& grid, std::ostream& out);

}  // namespace ghermite
