#pragma once

#include <Eigen/Dense>
#include <string>

#include "tvvecm/calendar.hpp"
#include "tvvecm/tv_vecm.hpp"

namespace tvvecm {

/// Renders the speed index as a self-contained two-panel SVG: the level
/// (with its band when present) on top, the first difference below.
/// Output is deterministic text suitable for diffing.
std::string render_speed_svg(const IntegrationSpeedPath& path,
                             const std::string& title = "integration speed");

void write_speed_svg_file(const IntegrationSpeedPath& path, const std::string& file,
                          const std::string& title = "integration speed");

}  // namespace tvvecm
