#pragma once

#include "ghermite/recurrence.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace ghermite {

/// Which short-range term enters V. Derived uses the same A_n/a_n as the ladder
/// relations (the zeros are exact critical points of F); Uncorrected keeps 2 b_n / x on
/// the half line.
enum class FieldForm { Derived, Uncorrected };

/// V(x) = x^2 + 2 lambda log(1/|x|) + log C_lambda + log g_n(x) with
///   half line:  g_n = 2 + c_n/x + m_n/(x - a)
///   symmetric:  g_n = 2 + 2 a m_n/(x^2 - a^2)
/// where m_n is the boundary mass, c_n = 2 b_n - m_n (Derived) or 2 b_n (Uncorrected).
/// The lambda term is dropped exactly when lambda = 0. Needs n <= N - 1.
class ExternalField {
public:
    ExternalField(const RecurrenceTable& table, int n, FieldForm form = FieldForm::Derived);

    int degree() const { return n_; }
    double lambda() const { return lambda_; }
    double log_normalization() const { return log_c_; }
    const Support& support() const { return support_; }

    /// Throws FieldSingularity at a pole or where g_n <= 0.
    double operator()(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;
    /// log g_n(x).
    double short_range(double x) const;

private:
    struct G {
        double g, dg, d2g;
    };
    G g(double x) const;

    int n_;
    double lambda_;
    double log_c_;
    Support support_;
    double c_ = 0.0;
    double m_ = 0.0;
};

struct ConfigurationEnergy {
    /// 2 sum_{i<j} log(1/|x_i - x_j|) + sum V(x_i)
    double F = 0.0;
    /// F - n log C_lambda
    double E = 0.0;
};

/// Throws SingularConfiguration on coincident points.
ConfigurationEnergy total_energy(const std::vector<double>& points, const ExternalField& field);

struct EnergyReport {
    int n = 0;
    double lambda_n = 0.0;
    double E_star_n = 0.0;
    /// (E + (n lambda + n(n-1)/2) log n) / n^2
    double diagnostic = 0.0;
    /// Same quantity from the rescaled points and the rescaled field V_n.
    double diagnostic_rescaled = 0.0;
    double limit = 0.0;
    double gap = 0.0;
};

/// Energy at the zeros of H_n. The limit is the equilibrium energy for alpha = lambda/n on
/// the support truncated at `limit_a` (defaults to the table's own truncation point).
EnergyReport energy_at_zeros(const RecurrenceTable& table, int n, std::optional<double> limit_a = std::nullopt,
                             FieldForm form = FieldForm::Derived);

/// For each n: lambda_n = round(alpha n), a table of depth n + 1 truncated at limit_a sqrt(n),
/// so that the rescaled zeros see the fixed truncation limit_a. All reports share the
/// limit E*(alpha, limit_a).
std::vector<EnergyReport> convergence_sweep(SupportKind kind, double alpha, double limit_a,
                                            const std::vector<int>& n_list, const QuadratureScheme& scheme = {});

/// CSV with header `n,lambda_n,E_star_n,diagnostic,limit,gap`.
void write_sweep_csv(const std::vector<EnergyReport>& reports, std::ostream& out);

struct MinimizationResult {
    std::vector<double> points;
    double F = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
};

/// Damped Newton descent of F from an admissible, strictly increasing start (n <= 8).
MinimizationResult minimize_configuration(const ExternalField& field, std::vector<double> start,
                                          int max_iterations = 200);

}  // namespace ghermite
