#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pb/state.hpp"

namespace pb {

/// Minimal self-contained SVG line plot: one polyline per named series over a
/// shared abscissa, auto-scaled axes, legend in the top-right corner.
void write_svg_plot(
    const std::string& path, const std::string& title,
    const std::string& xlabel, const std::vector<double>& xs,
    const std::vector<std::pair<std::string, std::vector<double>>>& series);

}  // namespace pb
