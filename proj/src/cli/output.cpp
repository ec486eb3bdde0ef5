#include "tsengflow/cli/output.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace tsengflow::cli {

std::string format_number(double value) { return fmt::format("{:.17g}", value); }

std::string trajectory_csv(const Trajectory& trajectory) {
    std::string out(kTrajectoryHeader);
    out += '\n';
    for (const auto& s : trajectory.samples) {
        out += fmt::format("{},{},{},{},{},{},{},{}\n", format_number(s.t), format_number(s.x.norm()),
                           format_number(s.residual_fp), format_number(s.feasibility_gap), format_number(s.eps),
                           format_number(s.beta), format_number(s.lambda),
                           s.dist_oracle ? format_number(*s.dist_oracle) : std::string());
    }
    return out;
}

namespace {

std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string log_line_chart_svg(std::span<const double> x, std::span<const double> y, std::string_view title,
                               std::string_view x_label, std::string_view y_label) {
    constexpr double width = 640, height = 400;
    constexpr double left = 70, right = 20, top = 40, bottom = 50;
    const double plot_w = width - left - right, plot_h = height - top - bottom;

    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (std::isfinite(x[i]) && std::isfinite(y[i]) && y[i] > 0.0) pts.emplace_back(x[i], std::log10(y[i]));
    }

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<text x=\"{2}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{3}</text>\n",
        width, height, left + plot_w / 2, escape(title));
    svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", left,
                       top, plot_w, plot_h);
    svg += fmt::format(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
        left + plot_w / 2, height - 12, escape(x_label));
    svg += fmt::format(
        "<text x=\"16\" y=\"{0}\" transform=\"rotate(-90 16 {0})\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"12\">{1}</text>\n",
        top + plot_h / 2, escape(y_label));

    if (pts.empty()) {
        svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                           "font-size=\"12\">no positive data</text>\n</svg>\n",
                           left + plot_w / 2, top + plot_h / 2);
        return svg;
    }

    double x_min = pts.front().first, x_max = x_min, y_min = pts.front().second, y_max = y_min;
    for (const auto& [px, py] : pts) {
        x_min = std::min(x_min, px);
        x_max = std::max(x_max, px);
        y_min = std::min(y_min, py);
        y_max = std::max(y_max, py);
    }
    y_min = std::floor(y_min);
    y_max = std::ceil(y_max);
    if (y_max == y_min) y_max = y_min + 1;
    if (x_max == x_min) x_max = x_min + 1;
    auto sx = [&](double v) { return left + (v - x_min) / (x_max - x_min) * plot_w; };
    auto sy = [&](double v) { return top + (y_max - v) / (y_max - y_min) * plot_h; };

    const int decades = static_cast<int>(y_max - y_min);
    const int stride = std::max(1, decades / 8);
    for (int k = 0; k <= decades; k += stride) {
        const double v = y_min + k;
        svg += fmt::format("<line x1=\"{0}\" x2=\"{1}\" y1=\"{2:.2f}\" y2=\"{2:.2f}\" stroke=\"#dddddd\"/>\n", left,
                           left + plot_w, sy(v));
        svg += fmt::format("<text x=\"{}\" y=\"{:.2f}\" text-anchor=\"end\" font-family=\"sans-serif\" "
                           "font-size=\"11\">1e{}</text>\n",
                           left - 6, sy(v) + 4, static_cast<int>(v));
    }
    for (int k = 0; k <= 4; ++k) {
        const double v = x_min + (x_max - x_min) * k / 4.0;
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                           "font-size=\"11\">{:.4g}</text>\n",
                           sx(v), top + plot_h + 16, v);
    }

    svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        svg += fmt::format("{}{:.2f},{:.2f}", i == 0 ? "" : " ", sx(pts[i].first), sy(pts[i].second));
    }
    svg += "\"/>\n</svg>\n";
    return svg;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error(fmt::format("failed writing {}", path.string()));
}

}  // namespace tsengflow::cli
