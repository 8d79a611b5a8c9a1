#include "lqgwalk/step_adjust.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lqgwalk {

void ComplianceConfig::validate() const {
    if (!(margin >= 0.0)) throw std::invalid_argument("compliance.margin must be non-negative");
    if (!(slope >= 0.0)) throw std::invalid_argument("compliance.slope must be non-negative");
    if (!(max_offset > margin)) throw std::invalid_argument("compliance.max_offset must exceed the margin");
    if (!(freeze_time >= 0.0)) throw std::invalid_argument("compliance.freeze_time must be non-negative");
    if (!(min_step_width >= 0.0)) throw std::invalid_argument("compliance.min_step_width must be non-negative");
}

double predict_next_footstep(double zmp, double dcm, double t, double step_end, double omega) {
    if (t > step_end) throw std::invalid_argument("predict_next_footstep: t past the end of the step");
    return zmp + (dcm - zmp) * std::exp(omega * (step_end - t));
}

double compliance_offset(double error, const ComplianceConfig& cfg) {
    const double excess = std::abs(error) - cfg.margin;
    if (excess <= 0.0) return 0.0;
    return std::copysign(std::min(cfg.slope * excess, cfg.max_offset), error);
}

std::optional<FootstepPlan> adjust_plan(const FootstepPlan& plan, int current_step, const Eigen::Vector2d& offset,
                                        double t_now, double freeze_time) {
    if (current_step < 0 || current_step >= plan.size()) throw std::out_of_range("adjust_plan: bad step index");
    // The closing stance is not a planned footstep.
    if (current_step == plan.size() - 1) return std::nullopt;
    const double touchdown = plan.step_duration * (current_step + 1);
    if (touchdown - t_now <= freeze_time) return std::nullopt;
    FootstepPlan out = plan;
    if (offset.isZero(0.0)) return out;
    for (int i = current_step + 1; i < out.size(); ++i) out.steps[static_cast<std::size_t>(i)].pos += offset;
    out.end_stance.pos += offset;
    return out;
}

double clamp_frontal_offset(double offset_y, double support_y, double planned_y, Side swing_side,
                            double min_step_width) {
    const double sign = lateral_sign(swing_side);
    // Signed lateral gap after the shift must stay >= min_step_width.
    const double gap = sign * (planned_y + offset_y - support_y);
    if (gap >= min_step_width) return offset_y;
    return sign * (min_step_width - sign * (planned_y - support_y));
}

} // namespace lqgwalk
