#pragma once

#include <optional>

#include <Eigen/Core>

#include "lqgwalk/planner.hpp"

namespace lqgwalk {

struct ComplianceConfig {
    bool enabled = false;
    double margin = 0.025;       // m, dead zone half-width
    double slope = 1.2;          // offset per meter of error beyond the margin
    double max_offset = 0.2;     // m, reachable-area clamp
    double freeze_time = 0.05;   // s, no adjustment closer than this to touchdown
    double min_step_width = 0.05; // m, frontal clamp keeping the swing foot on its own side

    void validate() const;
};

/// End-of-step DCM when the ZMP stays at p until T:
/// p + (zeta_t - p) e^{omega (T - t)}.
double predict_next_footstep(double zmp, double dcm, double t, double step_end, double omega);

/// Dead zone plus saturated linear slope on the excess beyond the margin.
double compliance_offset(double error, const ComplianceConfig& cfg);

/// Shifts steps[next..] and the closing stance by offset. Returns nullopt
/// (no-op) when fewer than freeze_time seconds of swing remain at t_now or
/// the current step has no upcoming footstep to move.
std::optional<FootstepPlan> adjust_plan(const FootstepPlan& plan, int current_step, const Eigen::Vector2d& offset,
                                        double t_now, double freeze_time);

/// Limits a frontal offset so the swing foot lands at least min_step_width
/// away from the support foot on its own side.
double clamp_frontal_offset(double offset_y, double support_y, double planned_y, Side swing_side,
                            double min_step_width);

} // namespace lqgwalk
