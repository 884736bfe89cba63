#include "ghermite/gauss_legendre.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace ghermite {

namespace {

GaussLegendreRule compute_rule(int order) {
    GaussLegendreRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_order.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute the derivative at the converged node
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= order; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = order * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
    if (order < 2) throw std::invalid_argument("Gauss-Legendre order must be >= 2");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<GaussLegendreRule>(compute_rule(order));
    return *slot;
}

double integrate_panel(const std::function<double(double)>& f, double lo, double hi,
                       const GaussLegendreRule& rule) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

std::vector<double> graded_breakpoints(double lo, double hi, double toward, double ratio,
                                       double min_relative_width) {
    const double length = hi - lo;
    std::vector<double> offsets{length};
    double width = length;
    while (width > min_relative_width * std::max(1.0, length)) {
        width *= ratio;
        offsets.push_back(width);
    }
    offsets.push_back(0.0);
    std::vector<double> points;
    points.reserve(offsets.size());
    if (toward == lo) {
        for (auto it = offsets.rbegin(); it != offsets.rend(); ++it) points.push_back(lo + *it);
    } else {
        for (double off : offsets) points.push_back(hi - off);
    }
    points.front() = lo;
    points.back() = hi;
    return points;
}

}  // namespace ghermite
