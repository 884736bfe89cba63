#include "ghermite/weights.hpp"

#include "ghermite/errors.hpp"
#include "ghermite/gauss_legendre.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace ghermite {

std::string to_string(SupportKind kind) {
    return kind == SupportKind::HalfLine ? "half" : "sym";
}

bool Support::contains(double x) const {
    if (kind == SupportKind::HalfLine) return x >= a;
    return std::abs(x) >= a;
}

bool Support::in_interior(double x) const {
    if (kind == SupportKind::HalfLine) return x > a;
    return std::abs(x) > a;
}

double normalization_constant(double lambda, const Support& support) {
    if (!(lambda > -0.5)) {
        std::ostringstream msg;
        msg << "weight exponent lambda=" << lambda << " must exceed -1/2";
        throw DomainError(msg.str());
    }
    const double s = lambda + 0.5;
    const double a = support.a;
    if (support.kind == SupportKind::SymmetricTruncated) {
        if (a < 0.0) throw DomainError("symmetric truncation requires a >= 0");
        return boost::math::tgamma(s, a * a);
    }
    if (a >= 0.0) return 0.5 * boost::math::tgamma(s, a * a);
    return 0.5 * boost::math::tgamma(s) + 0.5 * boost::math::tgamma_lower(s, a * a);
}

WeightSpec::WeightSpec(double lambda, Support support) : lambda_(lambda), support_(support) {
    if (!std::isfinite(support.a)) throw DomainError("truncation point must be finite");
    if (support.kind == SupportKind::HalfLine && lambda > 0.0 && support.a < 0.0)
        throw DomainError("lambda > 0 requires a >= 0 on the half line (origin must not be interior)");
    normalization_ = normalization_constant(lambda, support);
}

double WeightSpec::log_density(double x) const {
    if (!support_.contains(x)) return -std::numeric_limits<double>::infinity();
    double value = -x * x - std::log(normalization_);
    if (lambda_ != 0.0) value += 2.0 * lambda_ * std::log(std::abs(x));
    return value;
}

double WeightSpec::density(double x) const { return std::exp(log_density(x)); }

void QuadratureScheme::validate() const {
    if (panel_nodes < 2) throw DomainError("quadrature needs at least 2 nodes per panel");
    if (!(relative_tolerance > 0.0)) throw DomainError("quadrature tolerance must be positive");
    if (max_doublings < 0) throw DomainError("refinement budget must be non-negative");
    if (!(max_panel_width > 0.0)) throw DomainError("panel width must be positive");
}

double tail_mass(const WeightSpec& spec, double cutoff) {
    const double t = std::max(cutoff, 0.0);
    return 0.5 * boost::math::tgamma(spec.lambda() + 0.5, t * t) / spec.normalization();
}

namespace {

using Panel = std::pair<double, double>;

// |x|^{2 lambda} is smooth at the origin only for even integer powers.
bool singular_at_origin(double lambda) {
    const double p = 2.0 * lambda;
    return !(p >= 0.0 && p == std::floor(p));
}

void append_uniform(std::vector<Panel>& out, double lo, double hi, double max_width) {
    if (hi <= lo) return;
    const int count = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width)));
    for (int i = 0; i < count; ++i) {
        const double p = lo + (hi - lo) * i / count;
        const double q = (i + 1 == count) ? hi : lo + (hi - lo) * (i + 1) / count;
        out.emplace_back(p, q);
    }
}

// Segment [lo, hi]; grade geometrically towards `toward` when it is one of the ends.
void append_segment(std::vector<Panel>& out, double lo, double hi, double max_width, bool grade_lo,
                    bool grade_hi) {
    const double graded_length = std::min(0.5 * (hi - lo), max_width);
    double inner_lo = lo;
    double inner_hi = hi;
    if (grade_lo) {
        const auto pts = graded_breakpoints(lo, lo + graded_length, lo);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) out.emplace_back(pts[i], pts[i + 1]);
        inner_lo = lo + graded_length;
    }
    std::vector<Panel> tail;
    if (grade_hi) {
        const auto pts = graded_breakpoints(hi - graded_length, hi, hi);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) tail.emplace_back(pts[i], pts[i + 1]);
        inner_hi = hi - graded_length;
    }
    append_uniform(out, inner_lo, inner_hi, max_width);
    out.insert(out.end(), tail.begin(), tail.end());
}

// Panels covering the (right part of the) support up to the cutoff.
std::vector<Panel> base_panels(const WeightSpec& spec, double cutoff, double max_width) {
    std::vector<Panel> panels;
    const bool singular = singular_at_origin(spec.lambda());
    const double a = spec.a();
    if (spec.kind() == SupportKind::HalfLine && a < 0.0) {
        append_segment(panels, a, 0.0, max_width, false, singular);
        append_segment(panels, 0.0, cutoff, max_width, singular, false);
    } else {
        append_segment(panels, a, cutoff, max_width, singular && a == 0.0, false);
    }
    return panels;
}

std::vector<Panel> refine(const std::vector<Panel>& panels, int level) {
    if (level == 0) return panels;
    const int pieces = 1 << level;
    std::vector<Panel> out;
    out.reserve(panels.size() * pieces);
    for (const auto& [lo, hi] : panels) {
        for (int i = 0; i < pieces; ++i)
            out.emplace_back(lo + (hi - lo) * i / pieces, i + 1 == pieces ? hi : lo + (hi - lo) * (i + 1) / pieces);
    }
    return out;
}

double default_cutoff(const WeightSpec& spec, const QuadratureScheme& scheme, double extra_degree) {
    if (scheme.tail_cutoff > 0.0) return std::max(scheme.tail_cutoff, std::max(spec.a(), 0.0) + 1.0);
    const double lam = std::max(spec.lambda(), 0.0);
    return std::max(spec.a(), 0.0) + std::sqrt(lam + extra_degree) +
           std::sqrt(std::log(1.0 / scheme.relative_tolerance)) + 3.0;
}

struct Estimate {
    double value = 0.0;
    double absolute = 0.0;
};

Estimate panel_sum(const std::function<double(double)>& f, const WeightSpec& spec,
                   const std::vector<Panel>& panels, const GaussLegendreRule& rule) {
    const bool symmetric = spec.kind() == SupportKind::SymmetricTruncated;
    Estimate est;
    for (const auto& [lo, hi] : panels) {
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double x = mid + half * rule.nodes[i];
            const double w = rule.weights[i] * half * spec.density(x);
            if (w == 0.0) continue;
            double fx = f(x);
            if (symmetric) {
                const double fm = f(-x);
                est.value += w * (fx + fm);
                est.absolute += w * (std::abs(fx) + std::abs(fm));
            } else {
                est.value += w * fx;
                est.absolute += w * std::abs(fx);
            }
        }
    }
    return est;
}

}  // namespace

double integrate(const std::function<double(double)>& f, const WeightSpec& spec, const QuadratureScheme& scheme) {
    scheme.validate();
    const auto& rule = gauss_legendre(scheme.panel_nodes);
    const bool symmetric = spec.kind() == SupportKind::SymmetricTruncated;
    double cutoff = default_cutoff(spec, scheme, 0.0);

    for (int extension = 0;; ++extension) {
        const auto panels = base_panels(spec, cutoff, scheme.max_panel_width);
        Estimate previous = panel_sum(f, spec, panels, rule);
        Estimate current = previous;
        bool converged = false;
        for (int level = 1; level <= scheme.max_doublings; ++level) {
            current = panel_sum(f, spec, refine(panels, level), rule);
            const double scale = std::max(current.absolute, std::numeric_limits<double>::min());
            if (std::abs(current.value - previous.value) <= scheme.relative_tolerance * scale) {
                converged = true;
                break;
            }
            previous = current;
        }
        if (!converged) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "weighted quadrature did not converge after " << scheme.max_doublings
                << " panel doublings (last estimates " << previous.value << ", " << current.value << ")";
            throw QuadratureFailure(msg.str(), previous.value, current.value);
        }

        const double tail = tail_mass(spec, cutoff);
        const double f_right = f(cutoff);
        const double f_left = symmetric ? f(-cutoff) : 0.0;
        const double remainder = tail * (f_right + f_left);
        const double remainder_abs = tail * (std::abs(f_right) + std::abs(f_left));
        const double scale = std::max(current.absolute, std::numeric_limits<double>::min());
        if (remainder_abs <= scheme.relative_tolerance * scale || extension >= 30) {
            return current.value + remainder;
        }
        cutoff += 2.0;
    }
}

Discretization discretize(const WeightSpec& spec, int degree, const QuadratureScheme& scheme, int refinement) {
    scheme.validate();
    if (degree < 0) throw DomainError("discretization degree must be non-negative");
    const auto& rule = gauss_legendre(scheme.panel_nodes);
    const double cutoff = default_cutoff(spec, scheme, degree + 2.0 + std::max(spec.lambda(), 0.0));
    const auto panels = refine(base_panels(spec, cutoff, scheme.max_panel_width), refinement);

    std::vector<std::pair<double, double>> right;
    right.reserve(panels.size() * rule.nodes.size());
    for (const auto& [lo, hi] : panels) {
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double x = mid + half * rule.nodes[i];
            const double w = rule.weights[i] * half * spec.density(x);
            if (w > 0.0) right.emplace_back(x, w);
        }
    }
    Discretization d;
    if (spec.kind() == SupportKind::SymmetricTruncated) {
        d.nodes.reserve(2 * right.size());
        d.weights.reserve(2 * right.size());
        for (auto it = right.rbegin(); it != right.rend(); ++it) {
            d.nodes.push_back(-it->first);
            d.weights.push_back(it->second);
        }
    }
    for (const auto& [x, w] : right) {
        d.nodes.push_back(x);
        d.weights.push_back(w);
    }
    return d;
}

}  // namespace ghermite
