#pragma once

#include "ffdelay/csv.hpp"
#include "ffdelay/series.hpp"

#include <string>

namespace ffdelay {

struct ChartOptions {
    double width = 900.0;
    double height = 600.0;
    std::string fit_title = "Observed (red) and predicted (blue) performance";
    std::string load_title = "Training load w(t)";
    std::string y_label = "performance";

    friend bool operator==(const ChartOptions&, const ChartOptions&) = default;
};

/// Plot area inside the SVG canvas; exposed so tests can invert the mapping.
struct PlotFrame {
    double left, top, right, bottom;

    [[nodiscard]] double width() const { return right - left; }
    [[nodiscard]] double height() const { return bottom - top; }
};

[[nodiscard]] PlotFrame plot_frame(const ChartOptions& options);

/// Standalone SVG: predicted performance as one blue polyline, each
/// observation as one red circle, axes labelled day / performance.
/// Throws InputError on an empty table.
[[nodiscard]] std::string render_fit_chart(const PredictionTable& table, const ChartOptions& options = {});

/// Standalone SVG bar chart, one `bar` rect per day; the largest load spans
/// the full plot height. Throws InputError on an empty series.
[[nodiscard]] std::string render_load_chart(const LoadSeries& w, const ChartOptions& options = {});

} // namespace ffdelay
