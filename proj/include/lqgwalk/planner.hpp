#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lqgwalk/model.hpp"

namespace lqgwalk {

enum class Side { Left, Right };

/// +1 for the left foot (positive lateral axis), -1 for the right foot.
inline double lateral_sign(Side side) { return side == Side::Left ? 1.0 : -1.0; }
inline Side opposite(Side side) { return side == Side::Left ? Side::Right : Side::Left; }

struct StepParams {
    double step_length = 0.2;    // m, distance between consecutive same-side placements
    double step_width = 0.1;     // m, lateral distance between the foot centers
    double step_duration = 1.0;  // s
    double single_support = 1.0; // s
    double double_support = 0.0; // s
    int n_steps = 10;

    void validate() const;
};

struct Footstep {
    Eigen::Vector2d pos = Eigen::Vector2d::Zero();
    Side side = Side::Right;
    double t_start = 0.0; // s, time at which this foot becomes the support foot
};

struct Pose2D {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0; // rad
};

/// Support-foot sequence. Step i lasts [i SD, (i+1) SD) and stands on
/// steps[i]; the swing foot travels from placement(i-1) to placement(i+1).
/// placement(-1) is the foot standing next to steps[0] before the walk and
/// placement(n) is the foot brought alongside steps[n-1] at the end.
struct FootstepPlan {
    std::vector<Footstep> steps;
    Footstep start_stance;
    Footstep end_stance;
    double step_duration = 1.0;

    [[nodiscard]] int size() const { return static_cast<int>(steps.size()); }
    [[nodiscard]] double duration() const { return step_duration * static_cast<double>(steps.size()); }
    [[nodiscard]] const Footstep& placement(int i) const;
    [[nodiscard]] Eigen::Vector2d initial_center() const;
    [[nodiscard]] Eigen::Vector2d final_center() const;
};

/// Alternating footsteps starting with the right foot as support. Each
/// placement advances SL/2 along the heading, so the first and last swings
/// cover half a stride. lateral_offset_per_step adds a constant sideways
/// drift per placement (diagonal walking).
FootstepPlan plan_footsteps(const StepParams& params, const Pose2D& start, double lateral_offset_per_step = 0.0);

/// Planned ZMP at absolute time t: the support foot during single support,
/// then a linear blend toward the next support foot during double support.
Eigen::Vector2d zmp_reference(const FootstepPlan& plan, const StepParams& params, double t);

/// COM position solving xddot = omega^2 (x - p) with x(t0) = x0, x(tf) = xf.
double com_bvp(double zmp, double x0, double xf, double t0, double tf, double omega, double t);

/// Time derivative of com_bvp.
double com_vel_bvp(double zmp, double x0, double xf, double t0, double tf, double omega, double t);

double dcm_reference(double com, double com_vel, double omega);

/// Swing foot path. Horizontal motion is a cubic with zero end velocities
/// (or a Hermite cubic from the current velocity after a retarget); height
/// is two cubic halves through (0, 0), (T/2, apex), (T, 0) with zero slope at
/// each knot.
class SwingTrajectory {
public:
    SwingTrajectory() = default;
    SwingTrajectory(const Eigen::Vector2d& lift_off, const Eigen::Vector2d& touchdown, double apex_height,
                    double t_start, double duration);

    [[nodiscard]] Eigen::Vector3d position(double t) const;
    [[nodiscard]] Eigen::Vector3d velocity(double t) const;

    /// Same height profile, horizontal cubic re-fitted from the state at t_now
    /// so that the foot lands on new_touchdown at the original time.
    [[nodiscard]] SwingTrajectory retarget(double t_now, const Eigen::Vector2d& new_touchdown) const;

    [[nodiscard]] const Eigen::Vector2d& touchdown() const { return p1_; }
    [[nodiscard]] double t_start() const { return t_start_; }
    [[nodiscard]] double t_end() const { return t_start_ + duration_; }

private:
    // Horizontal Hermite segment on [h_t0_, t_end()].
    Eigen::Vector2d p0_ = Eigen::Vector2d::Zero();
    Eigen::Vector2d v0_ = Eigen::Vector2d::Zero();
    Eigen::Vector2d p1_ = Eigen::Vector2d::Zero();
    double h_t0_ = 0.0;
    double apex_ = 0.0;
    double t_start_ = 0.0;
    double duration_ = 1.0;
};

/// Free-function form: swing position at local time t in [0, T_ss].
Eigen::Vector3d swing_trajectory(const Eigen::Vector2d& lift_off, const Eigen::Vector2d& touchdown,
                                 double apex_height, double single_support, double t);

/// One per-step COM boundary value problem (both axes).
struct ComSegment {
    int step = 0;
    double t0 = 0.0;
    double tf = 1.0;
    Eigen::Vector2d zmp = Eigen::Vector2d::Zero();
    Eigen::Vector2d x0 = Eigen::Vector2d::Zero();
    Eigen::Vector2d xf = Eigen::Vector2d::Zero();

    [[nodiscard]] Eigen::Vector2d position(double t, double omega) const;
    [[nodiscard]] Eigen::Vector2d velocity(double t, double omega) const;
};

struct ReferenceSample {
    double t = 0.0;
    Eigen::Vector2d zmp = Eigen::Vector2d::Zero();
    Eigen::Vector2d com = Eigen::Vector2d::Zero();
    Eigen::Vector2d com_vel = Eigen::Vector2d::Zero();
    Eigen::Vector2d dcm = Eigen::Vector2d::Zero();
    Eigen::Vector3d swing = Eigen::Vector3d::Zero();
    int support = 0;
};

struct ReferenceTrajectory {
    double dt = 0.005;
    Eigen::Vector2d end_offset = Eigen::Vector2d::Zero(); // x_end - final stance center
    double omega = 0.0;
    int samples_per_step = 0;
    double swing_apex = 0.05;
    std::vector<ReferenceSample> samples;
    std::vector<ComSegment> segments;
    std::vector<SwingTrajectory> swings;

    [[nodiscard]] std::size_t size() const { return samples.size(); }
    [[nodiscard]] const ReferenceSample& operator[](std::size_t k) const { return samples[k]; }
};

/// How the COM chain starts and ends when x_start / x_end are not given.
enum class ComBoundary {
    StanceCenter,  // midpoint of the two feet of the initial/final stance
    ContinuousDcm, // chosen so COM velocity (and DCM) is continuous at the first and last seams
};

/// x_start / x_end giving a velocity-continuous chain. Falls back to the
/// stance centers where a plan is too short to need them.
std::pair<Eigen::Vector2d, Eigen::Vector2d> continuous_dcm_boundary(const FootstepPlan& plan, double omega);

struct ReferenceOptions {
    double dt = 0.005;         // s, sample spacing (control period)
    double swing_apex = 0.05;  // m
    ComBoundary boundary = ComBoundary::ContinuousDcm;
    std::optional<Eigen::Vector2d> x_start; // defaults to the initial stance center
    std::optional<Eigen::Vector2d> x_end;   // defaults to the final stance center
};

/// Chains one com_bvp per step, ending each step halfway between the
/// current and the next support foot, and samples ZMP/COM/DCM/swing
/// references on a uniform grid. Requires double_support == 0.
ReferenceTrajectory build_reference(const FootstepPlan& plan, const StepParams& params, const RobotParams& robot,
                                    const ReferenceOptions& options = {});

/// Re-plans from (t_anchor, com_anchor) after the footsteps changed. Samples
/// up to and including t_anchor are kept from previous; the current step's
/// COM segment restarts at com_anchor and the swing foot is retargeted.
ReferenceTrajectory replan_reference(const ReferenceTrajectory& previous, const FootstepPlan& plan,
                                     const StepParams& params, double t_anchor, const Eigen::Vector2d& com_anchor);

} // namespace lqgwalk
