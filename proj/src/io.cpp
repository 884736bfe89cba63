#include "ghermite/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace ghermite::io {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", value);
    return buf.data();
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot move output into place at " + path.string() + ": " + ec.message());
    }
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

JsonObject& JsonObject::add(const std::string& key, double value) {
    fields_.emplace_back(key, std::isfinite(value) ? format_number(value) : "null");
    return *this;
}

JsonObject& JsonObject::add(const std::string& key, int value) {
    fields_.emplace_back(key, std::to_string(value));
    return *this;
}

JsonObject& JsonObject::add(const std::string& key, const std::string& value) {
    fields_.emplace_back(key, json_escape(value));
    return *this;
}

JsonObject& JsonObject::add(const std::string& key, bool value) {
    fields_.emplace_back(key, value ? "true" : "false");
    return *this;
}

std::string JsonObject::str() const {
    std::string out = "{\n";
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        out += "  " + json_escape(fields_[i].first) + ": " + fields_[i].second;
        out += i + 1 < fields_.size() ? ",\n" : "\n";
    }
    out += "}\n";
    return out;
}

// ---- SVG ------------------------------------------------------------------

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 620.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 450.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#17becf",
                                                 "#9467bd", "#ff7f0e", "#8c564b", "#7f7f7f"};

std::string fixed(double v, int digits = 2) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.*f", digits, v);
    std::string s = buf.data();
    if (s == "-0.00" || s == "-0.0" || s == "-0") s.erase(0, 1);
    return s;
}

std::string tick_label(double v, double step) {
    const int digits = std::max(0, static_cast<int>(-std::floor(std::log10(step) + 1e-9)));
    return fixed(std::abs(v) < 0.5 * step * 1e-6 ? 0.0 : v, digits);
}

double nice_step(double range) {
    const double raw = range / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    double nice = 10.0;
    if (f <= 1.0) nice = 1.0;
    else if (f <= 2.0) nice = 2.0;
    else if (f <= 5.0) nice = 5.0;
    return nice * mag;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool empty() const { return !(lo <= hi); }
};

}  // namespace

std::string render_svg(const std::vector<Series>& series, const PlotOptions& options) {
    auto clip = [&](double y) { return options.y_clip > 0.0 ? std::min(y, options.y_clip) : y; };
    Range xr;
    Range yr;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(clip(y))) continue;
            xr.include(x);
            yr.include(clip(y));
        }
    }
    if (xr.empty()) xr = {0.0, 1.0};
    if (yr.empty()) yr = {0.0, 1.0};
    yr.include(0.0);
    if (xr.hi - xr.lo <= 0.0) {
        xr.lo -= 0.5;
        xr.hi += 0.5;
    }
    if (yr.hi - yr.lo <= 0.0) yr.hi = yr.lo + 1.0;
    const double xstep = nice_step(xr.hi - xr.lo);
    const double ystep = nice_step(yr.hi - yr.lo);
    const double x0 = std::floor(xr.lo / xstep) * xstep;
    const double x1 = std::ceil(xr.hi / xstep) * xstep;
    const double y0 = std::floor(yr.lo / ystep) * ystep;
    const double y1 = std::ceil(yr.hi / ystep) * ystep;

    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * (kRight - kLeft); };
    auto py = [&](double y) { return kBottom - (y - y0) / (y1 - y0) * (kBottom - kTop); };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"500\" "
           "viewBox=\"0 0 800 500\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << fixed(kWidth, 0) << "\" height=\"" << fixed(kHeight, 0)
        << "\" fill=\"white\"/>\n";
    if (!options.title.empty())
        svg << "<text x=\"" << fixed(0.5 * (kLeft + kRight)) << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(options.title) << "</text>\n";

    svg << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
        << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kBottom) << "\" x2=\"" << fixed(kRight) << "\" y2=\""
        << fixed(kBottom) << "\"/>\n"
        << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop) << "\" x2=\"" << fixed(kLeft) << "\" y2=\""
        << fixed(kBottom) << "\"/>\n";
    const int nx = static_cast<int>(std::lround((x1 - x0) / xstep));
    const int ny = static_cast<int>(std::lround((y1 - y0) / ystep));
    for (int i = 0; i <= nx; ++i) {
        const double p = px(x0 + i * xstep);
        svg << "<line x1=\"" << fixed(p) << "\" y1=\"" << fixed(kBottom) << "\" x2=\"" << fixed(p) << "\" y2=\""
            << fixed(kBottom + 5) << "\"/>\n";
    }
    for (int i = 0; i <= ny; ++i) {
        const double p = py(y0 + i * ystep);
        svg << "<line x1=\"" << fixed(kLeft - 5) << "\" y1=\"" << fixed(p) << "\" x2=\"" << fixed(kLeft)
            << "\" y2=\"" << fixed(p) << "\"/>\n";
    }
    svg << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
    for (int i = 0; i <= nx; ++i) {
        const double v = x0 + i * xstep;
        svg << "<text x=\"" << fixed(px(v)) << "\" y=\"" << fixed(kBottom + 20) << "\" text-anchor=\"middle\">"
            << tick_label(v, xstep) << "</text>\n";
    }
    for (int i = 0; i <= ny; ++i) {
        const double v = y0 + i * ystep;
        svg << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(py(v) + 4) << "\" text-anchor=\"end\">"
            << tick_label(v, ystep) << "</text>\n";
    }
    svg << "<text x=\"" << fixed(0.5 * (kLeft + kRight)) << "\" y=\"" << fixed(kBottom + 42)
        << "\" text-anchor=\"middle\">" << xml_escape(options.x_label) << "</text>\n";
    if (!options.y_label.empty())
        svg << "<text x=\"18\" y=\"" << fixed(0.5 * (kTop + kBottom)) << "\" text-anchor=\"middle\" "
            << "transform=\"rotate(-90 18 " << fixed(0.5 * (kTop + kBottom)) << ")\">" << xml_escape(options.y_label)
            << "</text>\n";
    svg << "</g>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % kPalette.size()];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto& [x, y] : series[s].points) {
            const double yc = clip(y);
            if (!std::isfinite(x) || !std::isfinite(yc)) continue;
            if (!first) svg << ' ';
            svg << fixed(px(x)) << ',' << fixed(py(yc));
            first = false;
        }
        svg << "\"/>\n";
        const double ly = kTop + 10 + 22.0 * static_cast<double>(s);
        svg << "<line x1=\"640\" y1=\"" << fixed(ly) << "\" x2=\"670\" y2=\"" << fixed(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"676\" y=\"" << fixed(ly + 4) << "\" font-family=\"sans-serif\" font-size=\"12\">"
            << xml_escape(series[s].label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_svg(const std::vector<Series>& series, const std::filesystem::path& path, const PlotOptions& options) {
    write_atomically(path, render_svg(series, options));
}

}  // namespace ghermite::io
