#pragma once

#include <string>
#include <vector>

#include "lqgwalk/planner.hpp"
#include "lqgwalk/sim.hpp"

namespace lqgwalk {

struct Series {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

/// Static line chart, fixed 800x400 viewport.
std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<Series>& series);

/// ZMP, COM and DCM reference traces for one axis (0 sagittal, 1 frontal).
std::string reference_svg(const ReferenceTrajectory& ref, int axis);

/// Truth vs reference vs estimate for one axis of a simulation log.
std::string tracking_svg(const SimulationResult& result, int axis);

/// Top view of planned and executed footprints; moved footprints are drawn
/// in a highlight colour together with the COM path.
std::string footsteps_svg(const SimulationResult& result, const RobotParams& robot);

} // namespace lqgwalk
