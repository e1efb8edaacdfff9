#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace parisian {

/// 17 significant digits, '.' as decimal separator regardless of locale.
std::string format_number(double value);

/// Fields joined with ',' and terminated by '\n'.
void write_csv_row(std::ostream& out, std::span<const std::string> fields);

struct ChartSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;  ///< non-finite values break the polyline
};

struct ChartMarker {
    double x = 0.0;
    std::string label;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ChartSeries> series;
    std::vector<ChartMarker> markers;  ///< vertical dashed lines
};

/// Standalone SVG line chart.
void write_svg(std::ostream& out, const Chart& chart, int width = 720, int height = 440);

}  // namespace parisian
