#pragma once

#include <filesystem>
#include <vector>

namespace magnon::experiments {

struct HeatmapOverlay {
    std::vector<double> times;
    std::vector<double> positions;
};

/// Renders values[time][site] with time on the horizontal axis and site
/// position on the vertical axis. Colour scale is fixed over [-1, 1]:
/// -1 -> #2166ac (blue), 0 -> #f7f7f7 (white), +1 -> #b2182b (red), linear
/// in between. Overlays are drawn as green polylines.
void write_heatmap_svg(const std::filesystem::path& path, const std::vector<double>& times,
                       const std::vector<double>& sites,
                       const std::vector<std::vector<double>>& values,
                       const std::vector<HeatmapOverlay>& overlays);

}  // namespace magnon::experiments
