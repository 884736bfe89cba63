#include "ghermite/recurrence.hpp"

#include "ghermite/errors.hpp"
#include "ghermite/io.hpp"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace ghermite {

RecurrenceTable::RecurrenceTable(WeightSpec spec, std::vector<double> diag, std::vector<double> offdiag)
    : spec_(std::move(spec)), diag_(std::move(diag)), offdiag_(std::move(offdiag)),
      cache_(std::make_shared<detail::DegreeCache>()) {
    const int n = static_cast<int>(diag_.size());
    if (n < 1) throw DomainError("recurrence table needs at least one degree");
    if (static_cast<int>(offdiag_.size()) != n + 1)
        throw TableInconsistency("offdiag must hold a_0..a_N (N+1 entries)");
    offdiag_[0] = 0.0;
    for (int k = 1; k <= n; ++k) {
        if (!(offdiag_[k] > 0.0) || !std::isfinite(offdiag_[k])) {
            std::ostringstream msg;
            msg << "offdiag entry a_" << k << " is not strictly positive";
            throw TableInconsistency(msg.str());
        }
    }

    const double a = spec_.a();
    weight_at_boundary_ = spec_.density(a);
    boundary_value_.resize(n + 1);
    boundary_value_[0] = 1.0;
    double prev = 0.0;
    for (int k = 0; k < n; ++k) {
        const double next = ((a - diag_[k]) * boundary_value_[k] - offdiag_[k] * prev) / offdiag_[k + 1];
        prev = boundary_value_[k];
        boundary_value_[k + 1] = next;
    }
}

double RecurrenceTable::boundary_mass(int k) const {
    const double h = boundary_value_.at(k);
    return h * h * weight_at_boundary_;
}

RecurrenceTable build_table(const WeightSpec& spec, int max_degree, const QuadratureScheme& scheme) {
    if (max_degree < 1) throw DomainError("build_table requires N >= 1");
    const auto grid = discretize(spec, 2 * max_degree + 2, scheme);
    const std::size_t m = grid.nodes.size();
    if (m <= static_cast<std::size_t>(max_degree) + 1)
        throw PrecisionExhausted("quadrature grid smaller than requested degree", max_degree);

    const double total = std::accumulate(grid.weights.begin(), grid.weights.end(), 0.0);
    std::vector<std::vector<double>> basis;
    basis.reserve(max_degree + 1);
    std::vector<double> q0(m);
    for (std::size_t i = 0; i < m; ++i) q0[i] = std::sqrt(grid.weights[i] / total);
    basis.push_back(std::move(q0));

    std::vector<double> diag(max_degree);
    std::vector<double> offdiag(max_degree + 1, 0.0);
    std::vector<double> r(m);
    const bool symmetric = spec.kind() == SupportKind::SymmetricTruncated;

    for (int k = 0; k < max_degree; ++k) {
        const auto& qk = basis[k];
        double bk = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            r[i] = grid.nodes[i] * qk[i];
            bk += r[i] * qk[i];
        }
        if (symmetric) bk = 0.0;
        diag[k] = bk;
        for (std::size_t i = 0; i < m; ++i) {
            r[i] -= bk * qk[i];
            if (k > 0) r[i] -= offdiag[k] * basis[k - 1][i];
        }
        // Two passes of classical Gram-Schmidt against the whole basis.
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j <= k; ++j) {
                const auto& qj = basis[j];
                double c = 0.0;
                for (std::size_t i = 0; i < m; ++i) c += qj[i] * r[i];
                for (std::size_t i = 0; i < m; ++i) r[i] -= c * qj[i];
            }
        }
        double norm2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) norm2 += r[i] * r[i];
        const double scale = 1.0 + bk * bk + offdiag[k] * offdiag[k];
        if (!(norm2 > 1e-26 * scale) || !std::isfinite(norm2)) {
            std::ostringstream msg;
            msg << "Stieltjes procedure lost positivity at degree " << k + 1 << " (squared norm " << norm2 << ")";
            throw PrecisionExhausted(msg.str(), k + 1);
        }
        const double ak = std::sqrt(norm2);
        offdiag[k + 1] = ak;
        std::vector<double> next(m);
        for (std::size_t i = 0; i < m; ++i) next[i] = r[i] / ak;
        basis.push_back(std::move(next));
    }
    return RecurrenceTable(spec, std::move(diag), std::move(offdiag));
}

double boundary_mass(const RecurrenceTable& table, int n) {
    if (n < 0 || n > table.max_degree()) throw std::out_of_range("boundary_mass: degree out of range");
    return table.boundary_mass(n);
}

double identity_residual(const RecurrenceTable& table, int n) {
    if (n < 1 || n > table.max_degree() - 1) throw std::out_of_range("identity_residual: need 1 <= n <= N-1");
    const double lambda = table.spec().lambda();
    const double a = table.spec().a();
    const double an = table.offdiag(n);
    const double an1 = table.offdiag(n + 1);
    const double mn = table.boundary_mass(n);
    if (table.spec().kind() == SupportKind::HalfLine) {
        const double bn = table.diag(n);
        return std::abs(an1 * an1 + an * an + bn * bn - (n + lambda + 0.5 + 0.5 * a * mn));
    }
    return std::abs(an * an + an1 * an1 - (n + lambda + 0.5 + a * mn));
}

void write_table_csv(const RecurrenceTable& table, std::ostream& out) {
    out << "k,diag,offdiag,boundary_mass\n";
    for (int k = 0; k < table.max_degree(); ++k) {
        out << k << ',' << io::format_number(table.diag(k)) << ',' << io::format_number(table.offdiag(k + 1))
            << ',' << io::format_number(table.boundary_mass(k)) << '\n';
    }
}

RecurrenceTable read_table_csv(std::istream& in, const WeightSpec& spec) {
    std::string line;
    if (!std::getline(in, line) || line != "k,diag,offdiag,boundary_mass")
        throw TableInconsistency("unexpected recurrence CSV header");
    std::vector<double> diag;
    std::vector<double> offdiag{0.0};
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 4) throw TableInconsistency("malformed recurrence CSV row: " + line);
        if (std::stoi(fields[0]) != static_cast<int>(diag.size()))
            throw TableInconsistency("recurrence CSV rows out of order");
        diag.push_back(std::stod(fields[1]));
        offdiag.push_back(std::stod(fields[2]));
    }
    return RecurrenceTable(spec, std::move(diag), std::move(offdiag));
}

}  // namespace ghermite
