#pragma once

#include <string>
#include <vector>

#include "mfspec/mfdfa.hpp"

namespace mfspec::plot {

struct Curve {
    Curve() = default;
    Curve(std::string n, std::vector<double> xs, std::vector<double> ys, bool scatter = false,
          std::vector<std::string> labels = {})
        : name(std::move(n)), x(std::move(xs)), y(std::move(ys)), markers(scatter), point_labels(std::move(labels)) {}

    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    bool markers = false;  ///< scatter instead of polyline
    std::vector<std::string> point_labels;  ///< optional text next to markers
};

struct Axes {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
};

/// Self-contained SVG; a "no data" placeholder when nothing is plottable.
std::string line_chart(const Axes& axes, const std::vector<Curve>& curves);

/// Vertically stacked panels sharing one document.
std::string stacked_panels(const std::string& title, const std::vector<Axes>& axes,
                           const std::vector<std::vector<Curve>>& panels);

/// Horizontal bars in the given order.
std::string bar_chart(const std::string& title, const std::string& value_label,
                      const std::vector<std::string>& labels, const std::vector<double>& values);

std::string placeholder(const std::string& title);

/// F_q(s) curves for the requested q values (those present in the surface),
/// curve i multiplied by 10^i so consecutive q sit one decade apart.
std::vector<Curve> decade_shifted_curves(const FluctuationSurface& surface, const std::vector<double>& qs);

std::string xml_escape(const std::string& text);

}  // namespace mfspec::plot
