#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ghermite {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Rules are computed once per order and shared; safe to call concurrently.
const GaussLegendreRule& gauss_legendre(int order);

/// Sum of the rule mapped onto [lo, hi].
double integrate_panel(const std::function<double(double)>& f, double lo, double hi,
                       const GaussLegendreRule& rule);

/// Panels on [lo, hi] that shrink geometrically towards `toward` (either lo or hi),
/// used to resolve log / algebraic endpoint singularities.
std::vector<double> graded_breakpoints(double lo, double hi, double toward, double ratio = 0.15,
                                       double min_relative_width = 1e-16);

}  // namespace ghermite
