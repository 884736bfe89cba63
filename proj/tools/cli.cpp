#include "cli.hpp"

#include "ghermite/energy.hpp"
#include "ghermite/equilibrium.hpp"
#include "ghermite/errors.hpp"
#include "ghermite/io.hpp"
#include "ghermite/recurrence.hpp"
#include "ghermite/zeros.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

namespace ghermite::cli {

namespace {

struct Options {
    double lambda = 0.0;
    double alpha = 0.0;
    double a = 0.0;
    std::string support = "half";
    std::vector<int> n;
    int grid = 200;
    int id = 0;
    std::string output;
    std::string format;
    std::string svg;
};

// Consistent flags that CLI11 cannot express on its own.
class FlagError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

SupportKind kind_of(const Options& o) {
    return o.support == "sym" ? SupportKind::SymmetricTruncated : SupportKind::HalfLine;
}

Support make_support(SupportKind kind, double a) {
    return kind == SupportKind::HalfLine ? Support::half_line(a) : Support::symmetric(a);
}

int single_degree(const Options& o) {
    if (o.n.size() != 1) throw FlagError("--n takes exactly one degree for this command");
    return o.n.front();
}

std::vector<int> degree_list(const Options& o) {
    if (o.n.empty()) throw FlagError("--n needs at least one degree");
    auto list = o.n;
    for (std::size_t i = 1; i < list.size(); ++i)
        if (list[i] <= list[i - 1]) throw FlagError("--n list must be strictly increasing");
    return list;
}

void emit(const std::string& text, const std::string& output) {
    if (output.empty()) std::cout << text;
    else io::write_atomically(output, text);
}

// Table whose zeros, rescaled by sqrt(n), see the truncation point `a`.
RecurrenceTable alpha_mode_table(SupportKind kind, double alpha, double a, int n) {
    const double lambda_n = std::round(alpha * n);
    return build_table(WeightSpec(lambda_n, make_support(kind, a * std::sqrt(static_cast<double>(n)))), n);
}

void cmd_coeffs(const Options& o) {
    const auto table = build_table(WeightSpec(o.lambda, make_support(kind_of(o), o.a)), single_degree(o));
    std::ostringstream out;
    write_table_csv(table, out);
    emit(out.str(), o.output);
}

void cmd_zeros(const Options& o) {
    const int n = single_degree(o);
    const auto table = build_table(WeightSpec(o.lambda, make_support(kind_of(o), o.a)), n);
    std::ostringstream out;
    write_zeros_csv(compute_zeros(table, n), out);
    emit(out.str(), o.output);
}

std::string density_label(const EquilibriumMeasure& m) {
    std::ostringstream label;
    label << to_string(m.tag) << " alpha=" << m.alpha << " a=" << m.a;
    return label.str();
}

void cmd_density(const Options& o) {
    const auto m = solve_endpoints(o.alpha, o.a, kind_of(o));
    const std::string format = o.format.empty() ? "json" : o.format;
    if (format == "json") {
        emit(measure_json(m), o.output);
        return;
    }
    const auto grid = density_grid(m, o.grid);
    if (format == "csv") {
        std::ostringstream out;
        write_density_csv(grid, out);
        emit(out.str(), o.output);
        return;
    }
    io::PlotOptions plot;
    plot.title = "Equilibrium density";
    plot.y_label = "f(x)";
    plot.y_clip = 1.5;
    emit(io::render_svg({{density_label(m), grid}}, plot), o.output);
}

void cmd_compare(const Options& o) {
    const auto kind = kind_of(o);
    const auto m = solve_endpoints(o.alpha, o.a, kind);
    const auto degrees = degree_list(o);
    std::ostringstream out;
    out << "n,lambda_n,ks\n";
    std::vector<double> last_zeros;
    for (int n : degrees) {
        const auto table = alpha_mode_table(kind, o.alpha, o.a, n);
        const auto zs = compute_zeros(table, n);
        const double ks = ks_distance(empirical_cdf(zs), [&](double x) { return density_cdf(m, x); });
        out << n << ',' << io::format_number(table.spec().lambda()) << ',' << io::format_number(ks) << '\n';
        last_zeros = zs.rescaled();
    }
    emit(out.str(), o.output);
    if (o.svg.empty()) return;

    const int n = static_cast<int>(last_zeros.size());
    const int bins = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    const double lo = (kind == SupportKind::HalfLine ? m.sigma : -m.b) - 0.1;
    const double hi = m.b + 0.1;
    const double width = (hi - lo) / bins;
    std::vector<int> counts(bins, 0);
    for (double x : last_zeros) {
        const int k = std::clamp(static_cast<int>((x - lo) / width), 0, bins - 1);
        ++counts[k];
    }
    io::Series hist{"zeros n=" + std::to_string(n), {}};
    double peak = 0.0;
    for (int k = 0; k < bins; ++k) {
        const double h = counts[k] / (n * width);
        peak = std::max(peak, h);
        hist.points.emplace_back(lo + k * width, h);
        hist.points.emplace_back(lo + (k + 1) * width, h);
    }
    io::PlotOptions plot;
    plot.title = "Rescaled zeros against the limit density";
    plot.y_label = "density";
    plot.y_clip = 1.5 * peak;
    io::emit_svg({hist, {density_label(m), density_grid(m, o.grid)}}, o.svg, plot);
}

void cmd_energy(const Options& o) {
    const auto reports = convergence_sweep(kind_of(o), o.alpha, o.a, degree_list(o));
    std::ostringstream out;
    write_sweep_csv(reports, out);
    emit(out.str(), o.output);
}

void cmd_figure(const Options& o) {
    struct Curve {
        double alpha;
        double a;
        SupportKind kind;
        std::string label;
    };
    const auto half = SupportKind::HalfLine;
    const auto sym = SupportKind::SymmetricTruncated;
    std::vector<Curve> curves;
    io::PlotOptions plot;
    plot.y_label = "f(x)";
    switch (o.id) {
        case 1:
            curves = {{0.0, 1.0, half, "a=1"},
                      {0.0, 0.0, half, "a=0"},
                      {0.0, -1.0, half, "a=-1"},
                      {0.0, -std::numbers::sqrt2, half, "a=-sqrt2"}};
            plot.title = "Half line, alpha=0";
            plot.y_clip = 1.2;
            break;
        case 2:
            curves = {{2.0, 1.0, half, "a=1"}, {2.0, critical_sigma0_halfline(2.0).sigma, half, "a=a_c"}};
            plot.title = "Half line, alpha=2";
            plot.y_clip = 1.2;
            break;
        case 3:
            curves = {{2.0, critical_sigma0_symmetric(2.0).sigma, sym, "a=a_c"}};
            plot.title = "Symmetric, alpha=2, 0<a<=a_c";
            plot.y_clip = 1.0;
            break;
        case 4:
            curves = {{2.0, 1.0, sym, "a=1"}};
            plot.title = "Symmetric, alpha=2, a=1";
            plot.y_clip = 1.0;
            break;
        case 5:
            curves = {{0.0, 0.0, sym, "a=0"}, {0.0, 0.25, sym, "a=0.25"}};
            plot.title = "Symmetric, alpha=0";
            plot.y_clip = 1.0;
            break;
        default: throw FlagError("--id must be between 1 and 5");
    }
    std::vector<io::Series> series;
    for (const auto& c : curves) {
        const auto m = solve_endpoints(c.alpha, c.a, c.kind);
        series.push_back({c.label, density_grid(m, o.grid)});
    }
    emit(io::render_svg(series, plot), o.output);
}

void add_support_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--a", o.a, "Truncation point")->required();
    cmd->add_option("--support", o.support, "Support kind")->check(CLI::IsMember({"half", "sym"}))->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv) {
    Options o;
    CLI::App app{"Truncated generalized Hermite polynomials: recurrences, zeros, equilibrium densities and energies",
                 "ghermite"};
    app.require_subcommand(1);

    auto* coeffs = app.add_subcommand("coeffs", "Recurrence table as CSV (k,diag,offdiag,boundary_mass)");
    auto* zeros = app.add_subcommand("zeros", "Zeros of H_n as CSV (i,zero,rescaled)");
    for (auto* cmd : {coeffs, zeros}) {
        cmd->add_option("--lambda", o.lambda, "Weight exponent lambda >= 0")->required()->check(CLI::NonNegativeNumber);
        add_support_flags(cmd, o);
        cmd->add_option("--n", o.n, "Degree")->required()->check(CLI::PositiveNumber);
        cmd->add_option("--output", o.output, "Output file (default stdout)");
    }

    auto* density = app.add_subcommand("density", "Limit density: measure JSON, grid CSV (x,f) or SVG");
    auto* compare = app.add_subcommand("compare", "KS distance of rescaled zeros to the limit CDF (n,lambda_n,ks)");
    auto* energy = app.add_subcommand("energy", "Energy sweep CSV (n,lambda_n,E_star_n,diagnostic,limit,gap)");
    for (auto* cmd : {density, compare, energy}) {
        cmd->add_option("--alpha", o.alpha, "Limit ratio lambda_n/n >= 0")->required()->check(CLI::NonNegativeNumber);
        add_support_flags(cmd, o);
        cmd->add_option("--output", o.output, "Output file (default stdout)");
    }
    for (auto* cmd : {density, compare})
        cmd->add_option("--grid", o.grid, "Density grid points per component")->check(CLI::Range(2, 1000000));
    density->add_option("--format", o.format, "json (default), csv or svg")->check(CLI::IsMember({"json", "csv", "svg"}));
    for (auto* cmd : {compare, energy})
        cmd->add_option("--n", o.n, "Degrees (increasing)")->required()->check(CLI::PositiveNumber);
    compare->add_option("--svg", o.svg, "Overlay of the last zero histogram and the limit density");

    auto* figure = app.add_subcommand("figure", "Density figures 1-5 as SVG");
    figure->add_option("--id", o.id, "Figure number")->required()->check(CLI::Range(1, 5));
    figure->add_option("--grid", o.grid, "Density grid points per component")->check(CLI::Range(2, 1000000));
    figure->add_option("--output", o.output, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (code != 0) std::cerr << app.help();
        return code == 0 ? 0 : 2;
    }

    try {
        if (coeffs->parsed()) cmd_coeffs(o);
        else if (zeros->parsed()) cmd_zeros(o);
        else if (density->parsed()) cmd_density(o);
        else if (compare->parsed()) cmd_compare(o);
        else if (energy->parsed()) cmd_energy(o);
        else if (figure->parsed()) cmd_figure(o);
    } catch (const FlagError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace ghermite::cli
