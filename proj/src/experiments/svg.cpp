#include "magnon/experiments/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "magnon/experiments/csv.hpp"

namespace magnon::experiments {

namespace {

constexpr int kWidth = 800;
constexpr int kHeight = 500;
constexpr int kMargin = 50;
constexpr std::size_t kMaxColumns = 400;

using Rgb = std::array<double, 3>;
constexpr Rgb kBlue{0x21, 0x66, 0xac};
constexpr Rgb kWhite{0xf7, 0xf7, 0xf7};
constexpr Rgb kRed{0xb2, 0x18, 0x2b};

std::string colour(double value) {
    const double v = std::clamp(value, -1.0, 1.0);
    const Rgb& end = v < 0.0 ? kBlue : kRed;
    const double w = std::abs(v);
    char buffer[8];
    std::snprintf(buffer, sizeof buffer, "#%02x%02x%02x",
                  static_cast<int>(std::lround(kWhite[0] + w * (end[0] - kWhite[0]))),
                  static_cast<int>(std::lround(kWhite[1] + w * (end[1] - kWhite[1]))),
                  static_cast<int>(std::lround(kWhite[2] + w * (end[2] - kWhite[2]))));
    return buffer;
}

}  // namespace

void write_heatmap_svg(const std::filesystem::path& path, const std::vector<double>& times,
                       const std::vector<double>& sites,
                       const std::vector<std::vector<double>>& values,
                       const std::vector<HeatmapOverlay>& overlays) {
    if (times.empty() || sites.empty() || values.size() != times.size()) {
        throw std::invalid_argument("heatmap: inconsistent dimensions");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");

    const double t0 = times.front();
    const double t1 = std::max(times.back(), t0 + 1e-12);
    const double x0 = sites.front();
    const double x1 = std::max(sites.back(), x0 + 1e-12);
    const double plot_w = kWidth - 2 * kMargin;
    const double plot_h = kHeight - 2 * kMargin;
    auto px = [&](double t) { return kMargin + plot_w * (t - t0) / (t1 - t0); };
    auto py = [&](double x) { return kHeight - kMargin - plot_h * (x - x0) / (x1 - x0); };

    const std::size_t stride = (times.size() + kMaxColumns - 1) / kMaxColumns;
    const double cell_w = plot_w / std::ceil(static_cast<double>(times.size()) / stride);
    const double cell_h = plot_h / static_cast<double>(sites.size());

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // Fully polarized background (sz = -1) is painted once; cells of that
    // colour are skipped.
    const std::string background = colour(-1.0);
    out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << format_number(plot_w)
        << "\" height=\"" << format_number(plot_h) << "\" fill=\"" << background << "\"/>\n";
    for (std::size_t c = 0, k = 0; k < times.size(); ++c, k += stride) {
        const double left = kMargin + cell_w * static_cast<double>(c);
        for (std::size_t s = 0; s < sites.size(); ++s) {
            const std::string fill = colour(values[k][s]);
            if (fill == background) continue;
            const double top = kHeight - kMargin - cell_h * static_cast<double>(s + 1);
            out << "<rect x=\"" << format_number(left) << "\" y=\"" << format_number(top)
                << "\" width=\"" << format_number(cell_w) << "\" height=\"" << format_number(cell_h)
                << "\" fill=\"" << fill << "\"/>\n";
        }
    }
    for (const auto& overlay : overlays) {
        out << "<polyline fill=\"none\" stroke=\"#1b9e3e\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < overlay.times.size(); ++i) {
            const double y = std::clamp(overlay.positions[i], x0, x1);
            out << (i ? " " : "") << format_number(px(overlay.times[i])) << ','
                << format_number(py(y));
        }
        out << "\"/>\n";
    }
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-size=\"14\">t (hbar/J), " << format_number(t0)
        << " to " << format_number(t1) << "</text>\n";
    out << "<text x=\"16\" y=\"" << kHeight / 2 << "\" font-size=\"14\" transform=\"rotate(-90 16 "
        << kHeight / 2 << ")\" text-anchor=\"middle\">x_n, " << format_number(x0) << " to "
        << format_number(x1) << "</text>\n";
    out << "</svg>\n";
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace magnon::experiments
