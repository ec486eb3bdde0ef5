#pragma once

#include "tsengflow/integrator.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace tsengflow::cli {

/// Header of trajectory.csv, fixed.
inline constexpr std::string_view kTrajectoryHeader =
    "t,norm_x,residual_fp,feasibility_gap,eps,beta,lambda,dist_oracle";

/// 17 significant digits, enough to round-trip any binary64 value.
std::string format_number(double value);

std::string trajectory_csv(const Trajectory& trajectory);

/// Minimal static SVG line chart with a logarithmic y axis. Nonpositive and
/// non-finite y values are skipped.
std::string log_line_chart_svg(std::span<const double> x, std::span<const double> y, std::string_view title,
                               std::string_view x_label, std::string_view y_label);

/// Writes `content` to `path`, throwing std::runtime_error on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace tsengflow::cli
