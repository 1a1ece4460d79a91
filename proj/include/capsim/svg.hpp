#pragma once

#include <string>
#include <vector>

namespace capsim {

struct ChartSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Renders a fixed 800x600 line chart: one polyline per series, linear axes
/// with 10 ticks each, a legend, no external assets. Output bytes depend only
/// on the inputs.
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<ChartSeries>& series);

/// render_line_chart written to a file. Throws std::runtime_error on I/O
/// failure.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<ChartSeries>& series);

}  // namespace capsim
