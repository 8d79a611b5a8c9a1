#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lqgwalk/controller.hpp"
#include "lqgwalk/estimator.hpp"
#include "lqgwalk/model.hpp"
#include "lqgwalk/planner.hpp"
#include "lqgwalk/step_adjust.hpp"

namespace lqgwalk {

enum class WalkShape { Straight, Diagonal };
enum class PushDirection { Forward, Backward, Left, Right };

/// Unit vector of a push direction in the ground plane.
Eigen::Vector2d direction_vector(PushDirection direction);

/// Constant force applied at the COM over [t_start, t_start + duration).
struct DisturbanceEvent {
    double t_start = 2.5;  // s
    double duration = 0.01; // s
    Eigen::Vector2d force = Eigen::Vector2d::Zero(); // N
};

struct FallThresholds {
    double dcm_error = 0.5; // m
};

struct NoiseSettings {
    bool enabled = false; // inject measurement noise; the filter always uses model
    NoiseModel model = NoiseModel::truncated(0.05);
    std::uint64_t seed = 1;
};

struct ScenarioConfig {
    std::string id = "scenario";
    RobotParams robot;   // com_height here is the design height
    StepParams steps;
    WalkShape shape = WalkShape::Straight;
    double lateral_offset_per_step = 0.05; // m, used by diagonal walks
    double swing_apex = 0.05;              // m
    ComBoundary com_boundary = ComBoundary::ContinuousDcm;
    NoiseSettings noise;
    LqrWeights lqr;
    ComplianceConfig compliance;
    std::vector<DisturbanceEvent> disturbances;
    std::optional<double> actual_com_height; // plant height when it differs from the design
    double dt_phys = 0.001;
    double dt_ctrl = 0.005;
    FallThresholds fall;

    void validate() const;
    [[nodiscard]] double plant_com_height() const { return actual_com_height.value_or(robot.com_height); }
};

/// One control cycle. Values are stored quantized (see numfmt.hpp).
struct LogRow {
    double t = 0.0;
    int support = 0;
    Eigen::Vector2d com_true, dcm_true;
    Eigen::Vector2d com_est, dcm_est;
    Eigen::Vector2d com_ref, dcm_ref, zmp_ref;
    Eigen::Vector2d zmp_cmd; // unsaturated
    Eigen::Vector2d zmp_sat;
    Eigen::Vector2d support_lo, support_hi;
    Eigen::Vector2d dcm_pred; // predicted end-of-step DCM
    Eigen::Vector2d offset;   // footstep adjustment issued this cycle
};

struct Metrics {
    Eigen::Vector2d rms_dcm_error = Eigen::Vector2d::Zero(); // per axis
    double max_dcm_error = 0.0;
    double zmp_in_polygon_fraction = 0.0; // unsaturated command inside the support box
    int steps_completed = 0;
};

struct Adjustment {
    double t = 0.0;
    int step = 0; // index of the support step during which the swing target moved
    Eigen::Vector2d offset = Eigen::Vector2d::Zero();
};

struct SimulationResult {
    std::string id;
    std::vector<LogRow> log;
    bool fell = false;
    double fall_time = std::numeric_limits<double>::quiet_NaN();
    Metrics metrics;
    FootstepPlan planned;
    FootstepPlan executed;
    std::vector<Adjustment> adjustments;
};

/// Sum of F / mass over the events active at t.
Eigen::Vector2d disturbance_accel(std::span<const DisturbanceEvent> events, double mass, double t);

/// True when |zeta - zeta_ref| exceeds the threshold on either axis (or the
/// state is no longer finite).
bool detect_fall(const std::array<AxisState, 2>& truth, double omega, const Eigen::Vector2d& dcm_ref,
                 const FallThresholds& thresholds);

/// Metrics from a log alone.
Metrics compute_metrics(std::span<const LogRow> log, bool fell);

/// Footstep plan for a scenario (straight or diagonal from the origin).
FootstepPlan scenario_footsteps(const ScenarioConfig& cfg);

/// Closed loop: measure, filter, control, saturate, integrate the plant over
/// dt_ctrl in dt_phys substeps, check for footstep adjustment, log.
SimulationResult run_scenario(const ScenarioConfig& cfg);

/// Runs independent scenarios with OpenMP. Output order follows input order.
std::vector<SimulationResult> run_batch(std::span<const ScenarioConfig> configs);

/// Single-threaded reference for run_batch.
std::vector<SimulationResult> run_batch_serial(std::span<const ScenarioConfig> configs);

/// Copy of base with noise off and a single push of the given magnitude.
ScenarioConfig with_push(const ScenarioConfig& base, PushDirection direction, double magnitude, double t_start = 2.5,
                         double duration = 0.01);

struct PushTrial {
    double force = 0.0; // N, magnitude
    bool survived = false;
};

struct PushLimitReport {
    PushDirection direction = PushDirection::Forward;
    double limit = 0.0; // N, largest surviving magnitude found
    double tolerance = 0.5;
    std::vector<PushTrial> trace;
};

/// Bisection on the push magnitude. Requires survival at force_low and a
/// fall at force_high, otherwise throws std::invalid_argument.
PushLimitReport find_push_limit(const ScenarioConfig& base, PushDirection direction, double force_low,
                                double force_high, double tolerance = 0.5, double t_start = 2.5,
                                double duration = 0.01);

/// Doubles the upper force from force_low until the robot falls (up to
/// force_cap), then bisects.
PushLimitReport find_push_limit_auto(const ScenarioConfig& base, PushDirection direction, double force_low,
                                     double force_cap, double tolerance = 0.5, double t_start = 2.5,
                                     double duration = 0.01);

/// Design/plant COM height mismatch on a four-step diagonal walk.
ScenarioConfig height_mismatch_scenario(const ScenarioConfig& base, double design_z, double actual_z);
SimulationResult run_height_mismatch(const ScenarioConfig& base, double design_z = 1.0, double actual_z = 1.2);

/// Force x time x axis grid of single pushes.
struct SweepGrid {
    std::vector<double> forces;   // N, signed
    std::vector<double> times{2.5};
    std::vector<char> axes{'x'};  // 'x' sagittal, 'y' frontal
    double duration = 0.01;
};

struct SweepPoint {
    char axis = 'x';
    double force = 0.0;
    double t_start = 0.0;
};

std::vector<SweepPoint> sweep_points(const SweepGrid& grid);
std::vector<ScenarioConfig> sweep_scenarios(const ScenarioConfig& base, const SweepGrid& grid);

} // namespace lqgwalk
