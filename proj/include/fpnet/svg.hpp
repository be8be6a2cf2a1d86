#pragma once

#include <filesystem>
#include <string>

#include "fpnet/experiments.hpp"

namespace fpnet {

/// Standalone SVG for one plot of a report. Output depends only on the
/// report contents. Throws EmptyReport if the report has no rows.
std::string render_svg(const ExperimentReport& report, const PlotSpec& plot);

/// Writes the report's first plot of the given kind; if it declares none, a
/// single series of the first two numeric columns is drawn.
void emit_svg_plot(const ExperimentReport& report, PlotKind kind, const std::filesystem::path& out);

}  // namespace fpnet
