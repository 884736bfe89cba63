#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace ghermite::io {

/// Shortest-independent, round-trippable rendering: 17 significant digits.
std::string format_number(double value);

/// Writes to `path` through a temporary sibling and a rename.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

/// Flat JSON object; values are emitted in insertion order.
class JsonObject {
public:
    JsonObject& add(const std::string& key, double value);
    JsonObject& add(const std::string& key, int value);
    JsonObject& add(const std::string& key, const std::string& value);
    JsonObject& add(const std::string& key, const char* value) { return add(key, std::string(value)); }
    JsonObject& add(const std::string& key, bool value);
    std::string str() const;

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct PlotOptions {
    std::string title;
    std::string x_label = "x";
    std::string y_label;
    /// Values above this are clipped when positive (hard-edge densities diverge).
    double y_clip = 0.0;
};

/// Standalone SVG 1.1 document, 800x500, axes with ticks, one polyline per series and a legend.
std::string render_svg(const std::vector<Series>& series, const PlotOptions& options = {});

void emit_svg(const std::vector<Series>& series, const std::filesystem::path& path,
              const PlotOptions& options = {});

}  // namespace ghermite::io
