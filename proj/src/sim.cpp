#include "lqgwalk/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <stdexcept>

#include "lqgwalk/numfmt.hpp"

namespace lqgwalk {

Eigen::Vector2d direction_vector(PushDirection direction) {
    switch (direction) {
    case PushDirection::Forward: return {1.0, 0.0};
    case PushDirection::Backward: return {-1.0, 0.0};
    case PushDirection::Left: return {0.0, 1.0};
    case PushDirection::Right: return {0.0, -1.0};
    }
    return Eigen::Vector2d::Zero();
}

void ScenarioConfig::validate() const {
    robot.validate();
    steps.validate();
    if (steps.double_support > 0.0) {
        throw std::invalid_argument("scenarios require steps.double_support == 0");
    }
    if (actual_com_height && !(*actual_com_height > 0.0)) {
        throw std::invalid_argument("actual_com_height must be positive");
    }
    noise.model.validate();
    lqr.validate();
    compliance.validate();
    if (!(dt_phys > 0.0) || !(dt_ctrl > 0.0)) throw std::invalid_argument("time steps must be positive");
    const double ratio = dt_ctrl / dt_phys;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 || std::round(ratio) < 1.0) {
        throw std::invalid_argument("dt_ctrl must be an integer multiple of dt_phys");
    }
    if (!(fall.dcm_error > 0.0)) throw std::invalid_argument("fall.dcm_error must be positive");
    if (!(swing_apex >= 0.0)) throw std::invalid_argument("swing_apex must be non-negative");
    for (const auto& ev : disturbances) {
        if (!(ev.duration > 0.0) || !(ev.t_start >= 0.0) || !ev.force.allFinite()) {
            throw std::invalid_argument("disturbance events need t_start >= 0, duration > 0, finite force");
        }
    }
}

Eigen::Vector2d disturbance_accel(std::span<const DisturbanceEvent> events, double mass, double t) {
    if (!(mass > 0.0)) throw std::invalid_argument("disturbance_accel: mass must be positive");
    Eigen::Vector2d a = Eigen::Vector2d::Zero();
    for (const auto& ev : events) {
        if (t >= ev.t_start && t < ev.t_start + ev.duration) a += ev.force / mass;
    }
    return a;
}

bool detect_fall(const std::array<AxisState, 2>& truth, double omega, const Eigen::Vector2d& dcm_ref,
                 const FallThresholds& thresholds) {
    for (int axis = 0; axis < 2; ++axis) {
        const double err = std::abs(truth[static_cast<std::size_t>(axis)].dcm(omega) - dcm_ref(axis));
        if (!(err <= thresholds.dcm_error)) return true;
    }
    return false;
}

Metrics compute_metrics(std::span<const LogRow> log, bool fell) {
    Metrics m;
    if (log.empty()) return m;
    Eigen::Vector2d sq = Eigen::Vector2d::Zero();
    std::size_t inside = 0;
    for (const auto& row : log) {
        const Eigen::Vector2d err = row.dcm_true - row.dcm_ref;
        sq += err.cwiseAbs2();
        m.max_dcm_error = std::max(m.max_dcm_error, err.cwiseAbs().maxCoeff());
        const bool in = (row.zmp_cmd.array() >= row.support_lo.array()).all() &&
                        (row.zmp_cmd.array() <= row.support_hi.array()).all();
        inside += in ? 1 : 0;
    }
    const double n = static_cast<double>(log.size());
    m.rms_dcm_error = (sq / n).cwiseSqrt();
    m.zmp_in_polygon_fraction = static_cast<double>(inside) / n;
    m.steps_completed = fell ? log.back().support : log.back().support + 1;
    return m;
}

FootstepPlan scenario_footsteps(const ScenarioConfig& cfg) {
    const double drift = cfg.shape == WalkShape::Diagonal ? cfg.lateral_offset_per_step : 0.0;
    return plan_footsteps(cfg.steps, Pose2D{}, drift);
}

namespace {

Eigen::Vector2d q(const Eigen::Vector2d& v) { return {quantize(v.x()), quantize(v.y())}; }

} // namespace

SimulationResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();

    const double omega = natural_frequency(cfg.robot);
    RobotParams plant_robot = cfg.robot;
    plant_robot.com_height = cfg.plant_com_height();
    const double omega_plant = natural_frequency(plant_robot);

    SimulationResult result;
    result.id = cfg.id;
    result.planned = scenario_footsteps(cfg);
    FootstepPlan plan = result.planned;

    ReferenceOptions ref_options;
    ref_options.dt = cfg.dt_ctrl;
    ref_options.swing_apex = cfg.swing_apex;
    ref_options.boundary = cfg.com_boundary;
    ReferenceTrajectory ref = build_reference(plan, cfg.steps, cfg.robot, ref_options);

    const StateSpace ss = build_state_space(omega);
    const Eigen::RowVector3d gain = lqr_gain(augment_with_integrator(ss), cfg.lqr);

    std::array<AxisState, 2> truth;
    std::array<ControllerState, 2> ctrl;
    std::vector<AxisKalmanFilter> filters;
    for (int a = 0; a < 2; ++a) {
        const auto& s0 = ref[0];
        truth[static_cast<std::size_t>(a)] = {s0.com(a), s0.com_vel(a)};
        AxisEstimate init;
        init.mean << s0.com(a), s0.dcm(a);
        init.cov = cfg.noise.model.measurement_cov;
        filters.emplace_back(ss, cfg.dt_ctrl, cfg.noise.model, init);
        ctrl[static_cast<std::size_t>(a)].gain = gain;
    }

    Rng rng(cfg.noise.seed);
    const NoiseModel silent{Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero(), 0.0};
    const NoiseModel& injected = cfg.noise.enabled ? cfg.noise.model : silent;
    const int substeps = static_cast<int>(std::lround(cfg.dt_ctrl / cfg.dt_phys));
    const int total = static_cast<int>(ref.size());
    Eigen::Vector2d u_applied = Eigen::Vector2d::Zero();
    result.log.reserve(static_cast<std::size_t>(total));

    for (int k = 0; k < total; ++k) {
        const double t = cfg.dt_ctrl * k;
        const ReferenceSample& r = ref[static_cast<std::size_t>(k)];
        const int step = r.support;
        LogRow row;
        row.t = quantize(t);
        row.support = step;

        // DCM is always expressed with the design frequency (the coordinate
        // the reference and the controller use), also for the plant state.
        Eigen::Vector2d com_est, dcm_est;
        for (int a = 0; a < 2; ++a) {
            const auto ua = static_cast<std::size_t>(a);
            const Eigen::Vector2d y = sample_measurement(truth[ua], omega, injected, rng);
            const AxisEstimate& est = k == 0 ? filters[ua].correct(y) : filters[ua].step(u_applied(a), y);
            com_est(a) = est.mean(0);
            dcm_est(a) = est.mean(1);
        }

        const bool falling = detect_fall(truth, omega, r.dcm, cfg.fall);

        const SupportBox box = support_polygon(plan, cfg.steps, cfg.robot, t);
        const Eigen::Vector2d center = box.center();
        const Eigen::Vector2d half = box.half_extent();
        Eigen::Vector2d u_raw, u_sat;
        for (int a = 0; a < 2; ++a) {
            const auto ua = static_cast<std::size_t>(a);
            const AxisReference axis_ref{r.com(a), r.dcm(a), r.zmp(a)};
            u_raw(a) = control_step(ctrl[ua], filters[ua].estimate(), axis_ref, cfg.dt_ctrl);
            u_sat(a) = saturate_zmp(u_raw(a), center(a), half(a));
            if (u_sat(a) != u_raw(a)) ctrl[ua].freeze_integrator();
        }

        row.com_true = q({truth[0].x, truth[1].x});
        row.dcm_true = q({truth[0].dcm(omega), truth[1].dcm(omega)});
        row.com_est = q(com_est);
        row.dcm_est = q(dcm_est);
        row.com_ref = q(r.com);
        row.dcm_ref = q(r.dcm);
        row.zmp_ref = q(r.zmp);
        row.zmp_cmd = q(u_raw);
        row.zmp_sat = q(u_sat);
        row.support_lo = q(box.lo);
        row.support_hi = q(box.hi);

        if (falling) {
            row.dcm_pred = row.dcm_est;
            row.offset.setZero();
            result.log.push_back(row);
            result.fell = true;
            result.fall_time = row.t;
            break;
        }

        for (int j = 0; j < substeps; ++j) {
            const double t_mid = t + (j + 0.5) * cfg.dt_phys;
            const Eigen::Vector2d acc = disturbance_accel(cfg.disturbances, cfg.robot.mass, t_mid);
            for (int a = 0; a < 2; ++a) {
                const auto ua = static_cast<std::size_t>(a);
                truth[ua] = integrate(truth[ua], u_sat(a), acc(a), omega_plant, cfg.dt_phys);
            }
        }
        u_applied = u_sat;

        // Footstep adjustment from the predicted end-of-step DCM.
        const double step_end = plan.step_duration * (step + 1);
        const Eigen::Vector2d& support = plan.placement(step).pos;
        const Footstep& next = plan.placement(step + 1);
        Eigen::Vector2d predicted;
        for (int a = 0; a < 2; ++a) predicted(a) = predict_next_footstep(support(a), dcm_est(a), t, step_end, omega);
        Eigen::Vector2d offset = Eigen::Vector2d::Zero();
        if (cfg.compliance.enabled) {
            const Eigen::Vector2d error = predicted - next.pos;
            offset << compliance_offset(error.x(), cfg.compliance), compliance_offset(error.y(), cfg.compliance);
            offset.y() = clamp_frontal_offset(offset.y(), support.y(), next.pos.y(), next.side,
                                              cfg.compliance.min_step_width);
            if (!offset.isZero(0.0)) {
                if (auto adjusted = adjust_plan(plan, step, offset, t, cfg.compliance.freeze_time)) {
                    plan = std::move(*adjusted);
                    ref = replan_reference(ref, plan, cfg.steps, t, com_est);
                    result.adjustments.push_back({t, step, offset});
                } else {
                    offset.setZero();
                }
            }
        }
        row.dcm_pred = q(predicted);
        row.offset = q(offset);
        result.log.push_back(row);
    }

    result.executed = plan;
    result.metrics = compute_metrics(result.log, result.fell);
    return result;
}

std::vector<SimulationResult> run_batch_serial(std::span<const ScenarioConfig> configs) {
    std::vector<SimulationResult> out;
    out.reserve(configs.size());
    for (const auto& cfg : configs) out.push_back(run_scenario(cfg));
    return out;
}

std::vector<SimulationResult> run_batch(std::span<const ScenarioConfig> configs) {
    const auto n = static_cast<std::ptrdiff_t>(configs.size());
    std::vector<SimulationResult> out(configs.size());
    std::vector<std::exception_ptr> errors(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        try {
            out[ui] = run_scenario(configs[ui]);
        } catch (...) {
            errors[ui] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

ScenarioConfig with_push(const ScenarioConfig& base, PushDirection direction, double magnitude, double t_start,
                         double duration) {
    ScenarioConfig cfg = base;
    cfg.noise.enabled = false;
    cfg.disturbances = {DisturbanceEvent{t_start, duration, direction_vector(direction) * magnitude}};
    return cfg;
}

namespace {

bool survives(const ScenarioConfig& base, PushDirection direction, double force, double t_start, double duration,
              PushLimitReport& report) {
    const bool ok = !run_scenario(with_push(base, direction, force, t_start, duration)).fell;
    report.trace.push_back({force, ok});
    return ok;
}

void bisect(const ScenarioConfig& base, PushDirection direction, double low, double high, double t_start,
            double duration, PushLimitReport& report) {
    while (high - low > report.tolerance) {
        const double mid = 0.5 * (low + high);
        (survives(base, direction, mid, t_start, duration, report) ? low : high) = mid;
    }
    report.limit = low;
}

} // namespace

PushLimitReport find_push_limit(const ScenarioConfig& base, PushDirection direction, double force_low,
                                double force_high, double tolerance, double t_start, double duration) {
    if (!(force_low >= 0.0) || !(force_high > force_low) || !(tolerance > 0.0)) {
        throw std::invalid_argument("push limit: need 0 <= force_low < force_high and tolerance > 0");
    }
    PushLimitReport report;
    report.direction = direction;
    report.tolerance = tolerance;
    if (!survives(base, direction, force_low, t_start, duration, report)) {
        throw std::invalid_argument("push limit: robot already falls at the lower bracket force");
    }
    if (survives(base, direction, force_high, t_start, duration, report)) {
        throw std::invalid_argument("push limit: robot survives the upper bracket force");
    }
    bisect(base, direction, force_low, force_high, t_start, duration, report);
    return report;
}

PushLimitReport find_push_limit_auto(const ScenarioConfig& base, PushDirection direction, double force_low,
                                     double force_cap, double tolerance, double t_start, double duration) {
    if (!(force_low > 0.0) || !(force_cap > force_low) || !(tolerance > 0.0)) {
        throw std::invalid_argument("push limit: need 0 < force_low < force_cap and tolerance > 0");
    }
    PushLimitReport report;
    report.direction = direction;
    report.tolerance = tolerance;
    if (!survives(base, direction, force_low, t_start, duration, report)) {
        throw std::invalid_argument("push limit: robot already falls at the lower bracket force");
    }
    double low = force_low;
    double high = std::min(2.0 * low, force_cap);
    while (survives(base, direction, high, t_start, duration, report)) {
        if (high >= force_cap) {
            std::ostringstream msg;
            msg << "push limit: robot survives every force up to the cap of " << force_cap << " N";
            throw std::invalid_argument(msg.str());
        }
        low = high;
        high = std::min(2.0 * high, force_cap);
    }
    bisect(base, direction, low, high, t_start, duration, report);
    return report;
}

ScenarioConfig height_mismatch_scenario(const ScenarioConfig& base, double design_z, double actual_z) {
    ScenarioConfig cfg = base;
    cfg.robot.com_height = design_z;
    cfg.actual_com_height = actual_z;
    cfg.shape = WalkShape::Diagonal;
    cfg.steps.n_steps = 4;
    return cfg;
}

SimulationResult run_height_mismatch(const ScenarioConfig& base, double design_z, double actual_z) {
    return run_scenario(height_mismatch_scenario(base, design_z, actual_z));
}

std::vector<SweepPoint> sweep_points(const SweepGrid& grid) {
    if (grid.forces.empty() || grid.times.empty() || grid.axes.empty()) {
        throw std::invalid_argument("sweep grid is empty");
    }
    std::vector<SweepPoint> points;
    for (char axis : grid.axes) {
        if (axis != 'x' && axis != 'y') throw std::invalid_argument("sweep axis must be 'x' or 'y'");
        for (double t : grid.times)
            for (double f : grid.forces) points.push_back({axis, f, t});
    }
    return points;
}

std::vector<ScenarioConfig> sweep_scenarios(const ScenarioConfig& base, const SweepGrid& grid) {
    std::vector<ScenarioConfig> out;
    for (const auto& p : sweep_points(grid)) {
        ScenarioConfig cfg = base;
        Eigen::Vector2d force = Eigen::Vector2d::Zero();
        force(p.axis == 'x' ? 0 : 1) = p.force;
        cfg.disturbances = {DisturbanceEvent{p.t_start, grid.duration, force}};
        std::ostringstream id;
        id << base.id << "_" << p.axis << "_" << format_number(p.force) << "N_t" << format_number(p.t_start);
        cfg.id = id.str();
        out.push_back(std::move(cfg));
    }
    return out;
}

} // namespace lqgwalk
