#pragma once

#include "ghermite/recurrence.hpp"

namespace ghermite {

struct PolyValue {
    double value = 0.0;
    double derivative = 0.0;
};

/// H_n(x) and H_n'(x) by the forward recurrence and its derivative run in tandem.
/// Throws ScaledEvaluationError on overflow.
PolyValue eval_poly(const RecurrenceTable& table, int n, double x);

/// H_n, H_n', H_n'' together with H_{n-1}, H_{n-1}' (zero for n = 0).
struct PolyJet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double prev_value = 0.0;
    double prev_d1 = 0.0;
};

PolyJet eval_jet(const RecurrenceTable& table, int n, double x);

/// Which closed forms to use for the ladder functions A_n, B_n.
///
/// `Derived` follows from the Christoffel-Darboux kernel with the boundary terms at the
/// truncation point(s). `Uncorrected` drops a_n m_n/x from the half-line A_n and flips the
/// sign of the symmetric boundary term:
///   half line:  A_n = 2a_n + a_n(2b_n - m_n)/x + a_n m_n/(x-a)
///   symmetric:  B_n boundary term  2 a_n h_n x/(x^2 - a^2),  h_n = H_n(a)H_{n-1}(a)w(a)
/// The two coincide when m_n = 0 (half line) or h_n = 0 (symmetric).
enum class LadderForm { Derived, Uncorrected };

struct OdeCoefficients {
    double A = 0.0;
    double B = 0.0;
    double R = 0.0;
    double S = 0.0;
};

/// A_n, B_n and the second-order coefficients
///   R_n = -2x + 2 lambda/x - A_n'/A_n
///   S_n = B_n' - B_n A_n'/A_n - B_n(2x - 2 lambda/x + B_n) + (a_n/a_{n-1}) A_n A_{n-1}
/// with A', B' in closed form. Requires 1 <= n <= N-1 and x not in {0, a, -a}.
OdeCoefficients ode_coefficients(const RecurrenceTable& table, int n, double x,
                                 LadderForm form = LadderForm::Derived);

/// |H_n' - A_n H_{n-1} + B_n H_n| / max(|H_n'|, |A_n H_{n-1}|, |B_n H_n|, 1).
double ladder_residual(const RecurrenceTable& table, int n, double x, LadderForm form = LadderForm::Derived);

/// |H'' + R H' + S H| / max(|H''|, |R H'|, |S H|, 1). H'' comes from the twice
/// differentiated three-term recurrence, so the residual only sees the formulas.
double ode_residual(const RecurrenceTable& table, int n, double x, LadderForm form = LadderForm::Derived);

/// Integral of H_n H_{n-1} w(y) / y over a symmetric support (cached per degree).
double reciprocal_moment(const RecurrenceTable& table, int n);

}  // namespace ghermite
