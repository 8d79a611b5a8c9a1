#include "lqgwalk/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lqgwalk {

void StepParams::validate() const {
    if (!(single_support > 0.0)) throw std::invalid_argument("steps.single_support must be positive");
    if (!(double_support >= 0.0)) throw std::invalid_argument("steps.double_support must be non-negative");
    if (std::abs(step_duration - (single_support + double_support)) > 1e-9) {
        throw std::invalid_argument("steps.step_duration must equal single_support + double_support");
    }
    if (n_steps < 1) throw std::invalid_argument("steps.n_steps must be at least 1");
    if (!(step_width > 0.0)) throw std::invalid_argument("steps.step_width must be positive");
    if (!std::isfinite(step_length)) throw std::invalid_argument("steps.step_length must be finite");
}

const Footstep& FootstepPlan::placement(int i) const {
    if (i == -1) return start_stance;
    if (i == size()) return end_stance;
    if (i < -1 || i > size()) throw std::out_of_range("footstep index out of range");
    return steps[static_cast<std::size_t>(i)];
}

Eigen::Vector2d FootstepPlan::initial_center() const { return 0.5 * (start_stance.pos + steps.front().pos); }

Eigen::Vector2d FootstepPlan::final_center() const { return 0.5 * (steps.back().pos + end_stance.pos); }

FootstepPlan plan_footsteps(const StepParams& params, const Pose2D& start, double lateral_offset_per_step) {
    params.validate();
    const Eigen::Vector2d origin(start.x, start.y);
    const Eigen::Vector2d forward(std::cos(start.heading), std::sin(start.heading));
    const Eigen::Vector2d lateral(-std::sin(start.heading), std::cos(start.heading));
    const double half_width = 0.5 * params.step_width;
    const double advance = 0.5 * params.step_length;

    auto make = [&](double along, double drift, Side side, double t_start) {
        Footstep f;
        f.side = side;
        f.pos = origin + forward * along + lateral * (lateral_sign(side) * half_width + drift);
        f.t_start = t_start;
        return f;
    };

    FootstepPlan plan;
    plan.step_duration = params.step_duration;
    plan.steps.reserve(static_cast<std::size_t>(params.n_steps));
    Side side = Side::Right;
    plan.start_stance = make(0.0, 0.0, opposite(side), 0.0);
    for (int i = 0; i < params.n_steps; ++i) {
        plan.steps.push_back(make(advance * i, lateral_offset_per_step * i, side, params.step_duration * i));
        side = opposite(side);
    }
    // Closing step: bring the swing foot alongside the last support foot.
    const int last = params.n_steps - 1;
    plan.end_stance = make(advance * last, lateral_offset_per_step * last, side,
                           params.step_duration * params.n_steps);
    return plan;
}

Eigen::Vector2d zmp_reference(const FootstepPlan& plan, const StepParams& params, double t) {
    if (!(t >= 0.0) || !(t < plan.duration())) throw std::out_of_range("zmp_reference: t outside the plan");
    const int i = std::min(static_cast<int>(std::floor(t / params.step_duration)), plan.size() - 1);
    const double local = t - params.step_duration * i;
    const Eigen::Vector2d& here = plan.placement(i).pos;
    if (local < params.single_support || params.double_support <= 0.0) return here;
    const Eigen::Vector2d& next = plan.placement(i + 1).pos;
    return here + (next - here) * ((local - params.single_support) / params.double_support);
}

double com_bvp(double zmp, double x0, double xf, double t0, double tf, double omega, double t) {
    if (tf == t0) throw std::invalid_argument("com_bvp: degenerate interval");
    return zmp + ((zmp - xf) * std::sinh(omega * (t - t0)) + (x0 - zmp) * std::sinh(omega * (t - tf))) /
                     std::sinh(omega * (t0 - tf));
}

double com_vel_bvp(double zmp, double x0, double xf, double t0, double tf, double omega, double t) {
    if (tf == t0) throw std::invalid_argument("com_vel_bvp: degenerate interval");
    return omega * ((zmp - xf) * std::cosh(omega * (t - t0)) + (x0 - zmp) * std::cosh(omega * (t - tf))) /
           std::sinh(omega * (t0 - tf));
}

double dcm_reference(double com, double com_vel, double omega) { return dcm_of({com, com_vel}, omega); }

// ---------------------------------------------------------------------------
// Swing foot

namespace {

double smoothstep(double s) { return s * s * (3.0 - 2.0 * s); }
double smoothstep_rate(double s) { return 6.0 * s * (1.0 - s); }

} // namespace

SwingTrajectory::SwingTrajectory(const Eigen::Vector2d& lift_off, const Eigen::Vector2d& touchdown,
                                 double apex_height, double t_start, double duration)
    : p0_(lift_off), p1_(touchdown), h_t0_(t_start), apex_(apex_height), t_start_(t_start), duration_(duration) {
    if (apex_height < 0.0) throw std::invalid_argument("swing apex height must be non-negative");
    if (!(duration > 0.0)) throw std::invalid_argument("swing duration must be positive");
}

Eigen::Vector3d SwingTrajectory::position(double t) const {
    const double te = t_end();
    t = std::clamp(t, t_start_, te);
    const double span = te - h_t0_;
    Eigen::Vector2d xy = p1_;
    if (span > 0.0) {
        const double s = std::clamp((t - h_t0_) / span, 0.0, 1.0);
        const double s2 = s * s;
        const double s3 = s2 * s;
        xy = (2 * s3 - 3 * s2 + 1) * p0_ + (s3 - 2 * s2 + s) * span * v0_ + (3 * s2 - 2 * s3) * p1_;
    }
    const double half = 0.5 * duration_;
    const double local = t - t_start_;
    const double z = local <= half ? apex_ * smoothstep(local / half) : apex_ * smoothstep((duration_ - local) / half);
    return {xy.x(), xy.y(), z};
}

Eigen::Vector3d SwingTrajectory::velocity(double t) const {
    const double te = t_end();
    if (t < t_start_ || t > te) return Eigen::Vector3d::Zero();
    const double span = te - h_t0_;
    Eigen::Vector2d vxy = Eigen::Vector2d::Zero();
    if (span > 0.0) {
        const double s = std::clamp((t - h_t0_) / span, 0.0, 1.0);
        const double s2 = s * s;
        vxy = ((6 * s2 - 6 * s) * p0_ + (3 * s2 - 4 * s + 1) * span * v0_ + (6 * s - 6 * s2) * p1_) / span;
    }
    const double half = 0.5 * duration_;
    const double local = t - t_start_;
    const double vz = local <= half ? apex_ * smoothstep_rate(local / half) / half
                                    : -apex_ * smoothstep_rate((duration_ - local) / half) / half;
    return {vxy.x(), vxy.y(), vz};
}

SwingTrajectory SwingTrajectory::retarget(double t_now, const Eigen::Vector2d& new_touchdown) const {
    if (!(t_now < t_end())) throw std::invalid_argument("swing retarget after touchdown");
    SwingTrajectory out = *this;
    if (t_now <= t_start_) {
        out.p1_ = new_touchdown;
        return out;
    }
    out.p0_ = position(t_now).head<2>();
    out.v0_ = velocity(t_now).head<2>();
    out.h_t0_ = t_now;
    out.p1_ = new_touchdown;
    return out;
}

Eigen::Vector3d swing_trajectory(const Eigen::Vector2d& lift_off, const Eigen::Vector2d& touchdown,
                                 double apex_height, double single_support, double t) {
    if (t < 0.0 || t > single_support) throw std::out_of_range("swing_trajectory: t outside single support");
    return SwingTrajectory(lift_off, touchdown, apex_height, 0.0, single_support).position(t);
}

// ---------------------------------------------------------------------------
// Reference assembly

Eigen::Vector2d ComSegment::position(double t, double omega) const {
    return {com_bvp(zmp.x(), x0.x(), xf.x(), t0, tf, omega, t), com_bvp(zmp.y(), x0.y(), xf.y(), t0, tf, omega, t)};
}

Eigen::Vector2d ComSegment::velocity(double t, double omega) const {
    return {com_vel_bvp(zmp.x(), x0.x(), xf.x(), t0, tf, omega, t),
            com_vel_bvp(zmp.y(), x0.y(), xf.y(), t0, tf, omega, t)};
}

namespace {

int samples_per_step(const StepParams& params, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("reference dt must be positive");
    const double ratio = params.step_duration / dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-6) {
        throw std::invalid_argument("step_duration must be an integer multiple of the reference dt");
    }
    return static_cast<int>(rounded);
}

ComSegment make_segment(const FootstepPlan& plan, int i, double t0, const Eigen::Vector2d& x0,
                        const Eigen::Vector2d& xf) {
    ComSegment seg;
    seg.step = i;
    seg.t0 = t0;
    seg.tf = plan.step_duration * (i + 1);
    seg.zmp = plan.placement(i).pos;
    seg.x0 = x0;
    seg.xf = xf;
    return seg;
}

Eigen::Vector2d step_end_target(const FootstepPlan& plan, int i) {
    return 0.5 * (plan.placement(i).pos + plan.placement(i + 1).pos);
}

SwingTrajectory make_swing(const FootstepPlan& plan, const StepParams& params, int i, double apex) {
    return {plan.placement(i - 1).pos, plan.placement(i + 1).pos, apex, plan.step_duration * i, params.single_support};
}

ReferenceSample evaluate(const ReferenceTrajectory& ref, const FootstepPlan& plan, int k) {
    const int i = k / ref.samples_per_step;
    ReferenceSample s;
    s.t = ref.dt * k;
    s.support = i;
    s.zmp = plan.placement(i).pos;
    const ComSegment& seg = ref.segments[static_cast<std::size_t>(i)];
    s.com = seg.position(s.t, ref.omega);
    s.com_vel = seg.velocity(s.t, ref.omega);
    s.dcm = s.com + s.com_vel / ref.omega;
    s.swing = ref.swings[static_cast<std::size_t>(i)].position(s.t);
    return s;
}

} // namespace

std::pair<Eigen::Vector2d, Eigen::Vector2d> continuous_dcm_boundary(const FootstepPlan& plan, double omega) {
    const int n = plan.size();
    Eigen::Vector2d x_start = plan.initial_center();
    Eigen::Vector2d x_end = plan.final_center();
    if (n < 2) return {x_start, x_end};
    const double c = std::cosh(omega * plan.step_duration);
    auto f = [&](int i) { return plan.placement(i).pos; };
    auto mid = [&](int i) { return step_end_target(plan, i); };
    // Equal end velocity of step i and start velocity of step i+1 (same T):
    //   (xf_i - p_i) c - (x0_i - p_i) = (xf_{i+1} - p_{i+1}) - (x0_{i+1} - p_{i+1}) c
    if (n >= 3) {
        const int last = n - 1;
        x_end = f(last) + (mid(last - 1) - f(last)) * c + (mid(last - 1) - f(last - 1)) * c -
                (mid(last - 2) - f(last - 1));
    }
    const Eigen::Vector2d xf1 = n == 2 ? x_end : mid(1);
    x_start = f(0) + (mid(0) - f(0)) * c - (xf1 - f(1)) + (mid(0) - f(1)) * c;
    return {x_start, x_end};
}

ReferenceTrajectory build_reference(const FootstepPlan& plan, const StepParams& params, const RobotParams& robot,
                                    const ReferenceOptions& options) {
    params.validate();
    robot.validate();
    if (params.double_support > 0.0) {
        throw std::invalid_argument("build_reference: the COM chain is only defined for double_support == 0");
    }
    if (plan.size() != params.n_steps) throw std::invalid_argument("build_reference: plan/params size mismatch");

    ReferenceTrajectory ref;
    ref.dt = options.dt;
    ref.omega = natural_frequency(robot);
    ref.samples_per_step = samples_per_step(params, options.dt);
    ref.swing_apex = options.swing_apex;

    const int n = plan.size();
    auto [x_start, x_end] = options.boundary == ComBoundary::ContinuousDcm
                                ? continuous_dcm_boundary(plan, ref.omega)
                                : std::pair{plan.initial_center(), plan.final_center()};
    if (options.x_start) x_start = *options.x_start;
    if (options.x_end) x_end = *options.x_end;
    ref.end_offset = x_end - plan.final_center();
    Eigen::Vector2d x0 = x_start;
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector2d xf = i == n - 1 ? x_end : step_end_target(plan, i);
        ref.segments.push_back(make_segment(plan, i, plan.step_duration * i, x0, xf));
        ref.swings.push_back(make_swing(plan, params, i, options.swing_apex));
        x0 = xf;
    }

    const int total = n * ref.samples_per_step;
    ref.samples.resize(static_cast<std::size_t>(total));
    for (int k = 0; k < total; ++k) ref.samples[static_cast<std::size_t>(k)] = evaluate(ref, plan, k);
    return ref;
}

ReferenceTrajectory replan_reference(const ReferenceTrajectory& previous, const FootstepPlan& plan,
                                     const StepParams& params, double t_anchor, const Eigen::Vector2d& com_anchor) {
    const int n = plan.size();
    if (static_cast<int>(previous.segments.size()) != n) {
        throw std::invalid_argument("replan_reference: plan size changed");
    }
    const int k_anchor = static_cast<int>(std::lround(t_anchor / previous.dt));
    const int total = static_cast<int>(previous.samples.size());
    if (k_anchor < 0 || k_anchor >= total) throw std::out_of_range("replan_reference: anchor outside trajectory");
    const int current = k_anchor / previous.samples_per_step;
    const double apex = previous.swing_apex;

    ReferenceTrajectory ref = previous;
    Eigen::Vector2d x0 = com_anchor;
    for (int i = current; i < n; ++i) {
        const Eigen::Vector2d xf = i == n - 1 ? Eigen::Vector2d(plan.final_center() + previous.end_offset)
                                              : step_end_target(plan, i);
        const double t0 = i == current ? previous.dt * k_anchor : plan.step_duration * i;
        ref.segments[static_cast<std::size_t>(i)] = make_segment(plan, i, t0, x0, xf);
        ref.swings[static_cast<std::size_t>(i)] =
            i == current ? previous.swings[static_cast<std::size_t>(i)].retarget(t0, plan.placement(i + 1).pos)
                         : make_swing(plan, params, i, apex);
        x0 = xf;
    }
    for (int k = k_anchor + 1; k < total; ++k) ref.samples[static_cast<std::size_t>(k)] = evaluate(ref, plan, k);
    return ref;
}

} // namespace lqgwalk
