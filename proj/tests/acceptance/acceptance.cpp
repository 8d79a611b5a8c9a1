// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "lqgwalk/controller.hpp"
#include "lqgwalk/csv.hpp"
#include "lqgwalk/estimator.hpp"
#include "lqgwalk/planner.hpp"
#include "lqgwalk/sim.hpp"
#include "lqgwalk/step_adjust.hpp"
#include "oracles.hpp"

using namespace lqgwalk;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), f, a);
    return buf;
}

ScenarioConfig walk10() {
    ScenarioConfig cfg;
    cfg.id = "walk10";
    cfg.steps.n_steps = 10;
    cfg.steps.step_length = 0.2;
    cfg.steps.step_width = 0.1;
    cfg.steps.step_duration = cfg.steps.single_support = 1.0;
    cfg.steps.double_support = 0.0;
    return cfg;
}

Outcome c1_planner_exactness() {
    const ScenarioConfig cfg = walk10();
    const FootstepPlan plan = scenario_footsteps(cfg);
    const ReferenceTrajectory ref = build_reference(plan, cfg.steps, cfg.robot, {});
    const double w = ref.omega;
    double seam = 0.0, ident = 0.0, ode = 0.0;
    for (std::size_t i = 0; i < ref.segments.size(); ++i) {
        const ComSegment& s = ref.segments[i];
        seam = std::max(seam, (s.position(s.t0, w) - s.x0).cwiseAbs().maxCoeff());
        seam = std::max(seam, (s.position(s.tf, w) - s.xf).cwiseAbs().maxCoeff());
        if (i + 1 < ref.segments.size()) seam = std::max(seam, (s.xf - ref.segments[i + 1].x0).cwiseAbs().maxCoeff());
    }
    for (const auto& s : ref.samples) ident = std::max(ident, (s.dcm - (s.com + s.com_vel / w)).cwiseAbs().maxCoeff());
    for (std::size_t k = 1; k + 1 < ref.size(); ++k) {
        if (ref[k - 1].support != ref[k + 1].support) continue;
        const Eigen::Vector2d acc = (ref[k + 1].com - 2 * ref[k].com + ref[k - 1].com) / (ref.dt * ref.dt);
        ode = std::max(ode, (acc - w * w * (ref[k].com - ref[k].zmp)).cwiseAbs().maxCoeff());
    }
    std::ostringstream d;
    d << "seam " << seam << " m, dcm identity " << ident << " m, ode residual " << ode << " m/s^2";
    return {seam <= 1e-12 && ident <= 1e-12 && ode <= 1e-4, d.str()};
}

Outcome c2_bvp_ivp_oracles() {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> pos(-0.3, 0.3), dur(0.3, 1.5), w(2.0, 4.0), frac(0.0, 1.0);
    double bvp = 0.0, ivp = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double p = pos(rng), x0 = pos(rng), xf = pos(rng), t0 = frac(rng), tf = t0 + dur(rng), om = w(rng);
        const double t = t0 + frac(rng) * (tf - t0);
        bvp = std::max(bvp, std::abs(com_bvp(p, x0, xf, t0, tf, om, t) - oracle::shooting_bvp(p, x0, xf, t0, tf, om, t)));
    }
    for (int i = 0; i < 100; ++i) {
        const double p = pos(rng), z = pos(rng), om = w(rng), T = dur(rng), t = frac(rng) * T;
        ivp = std::max(ivp, std::abs(predict_next_footstep(p, z, t, T, om) - oracle::rk4_dcm(z, p, om, T - t, 4000)));
    }
    std::ostringstream d;
    d << "com bvp vs shooting " << bvp << " m, dcm prediction vs rk4 " << ivp << " m";
    return {bvp <= 1e-8 && ivp <= 1e-9, d.str()};
}

Outcome c3_riccati() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0, abscissa = -INFINITY;
    int n = 0;
    while (n < 100) {
        const Eigen::MatrixXd A = Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return u(rng); });
        const Eigen::MatrixXd B = Eigen::MatrixXd::NullaryExpr(3, 1, [&] { return u(rng); });
        Eigen::MatrixXd ctrb(3, 3);
        ctrb << B, A * B, A * A * B;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(ctrb);
        if (svd.singularValues()(2) < 1e-2 * svd.singularValues()(0)) continue;
        const Eigen::MatrixXd M = Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return u(rng); });
        const Eigen::MatrixXd Q = M * M.transpose() + 0.1 * Eigen::MatrixXd::Identity(3, 3);
        const Eigen::MatrixXd R = Eigen::MatrixXd::Constant(1, 1, 0.5 + std::abs(u(rng)));
        const Eigen::MatrixXd P = solve_care(A, B, Q, R).P;
        const Eigen::MatrixXd res = A.transpose() * P + P * A - P * B * R.inverse() * B.transpose() * P + Q;
        worst = std::max(worst, res.cwiseAbs().maxCoeff());
        abscissa = std::max(abscissa, spectral_abscissa(A - B * R.inverse() * B.transpose() * P));
        ++n;
    }
    const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
    const double p = solve_care(one, one, one, one).P(0, 0);
    const double scalar_err = std::abs(p - (1.0 + std::sqrt(2.0)));
    const AugmentedSystem aug = augment_with_integrator(build_state_space(std::sqrt(9.81)));
    const double walk_abscissa = spectral_abscissa(aug.A - aug.B * lqr_gain(aug, LqrWeights{}));
    std::ostringstream d;
    d << "max residual " << worst << ", scalar |p-(1+sqrt2)| " << scalar_err << ", worst abscissa " << abscissa
      << ", walking loop abscissa " << walk_abscissa;
    return {worst <= 1e-8 && scalar_err <= 1e-8 && abscissa < 0.0 && walk_abscissa < 0.0, d.str()};
}

Outcome c4_noise() {
    std::vector<ScenarioConfig> cfgs;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        ScenarioConfig cfg = walk10();
        cfg.id = "noise_" + std::to_string(seed);
        cfg.noise.enabled = true;
        cfg.noise.model = NoiseModel::truncated(0.05);
        cfg.noise.seed = seed;
        cfgs.push_back(cfg);
    }
    const auto results = run_batch(cfgs);
    int falls = 0;
    double worst_rms = 0.0;
    for (const auto& r : results) {
        falls += r.fell ? 1 : 0;
        worst_rms = std::max(worst_rms, r.metrics.rms_dcm_error.maxCoeff());
    }
    std::ostringstream d;
    d << falls << "/20 falls, worst per-axis DCM RMS " << worst_rms << " m";
    return {falls == 0 && worst_rms <= 0.03, d.str()};
}

Outcome c5_push_grid() {
    std::vector<ScenarioConfig> cfgs;
    for (double f : {45.0, 70.0, 90.0, -45.0, -70.0, -90.0}) {
        cfgs.push_back(with_push(walk10(), f > 0 ? PushDirection::Forward : PushDirection::Backward, std::abs(f),
                                 2.5, 0.01));
    }
    const auto results = run_batch(cfgs);
    int survived = 0;
    for (const auto& r : results) survived += r.fell ? 0 : 1;
    return {survived == 6, std::to_string(survived) + "/6 survived"};
}

Outcome c6_push_limits() {
    const PushLimitReport fwd = find_push_limit_auto(walk10(), PushDirection::Forward, 10.0, 20000.0, 0.5);
    const PushLimitReport bwd = find_push_limit_auto(walk10(), PushDirection::Backward, 10.0, 20000.0, 0.5);
    const bool ok = fwd.limit >= 78.0 && fwd.limit <= 105.0 && bwd.limit >= 83.0 && bwd.limit <= 112.0;
    std::ostringstream d;
    d << "forward " << fwd.limit << " N (band [78, 105]), backward " << bwd.limit << " N (band [83, 112])";
    return {ok, d.str()};
}

Outcome c7_step_adjustment() {
    ScenarioConfig with = with_push(walk10(), PushDirection::Forward, 120.0, 2.5, 0.01);
    with.compliance.enabled = true;
    with.compliance.margin = 0.025;
    with.compliance.slope = 1.2;
    ScenarioConfig without = with;
    without.compliance.enabled = false;
    const SimulationResult a = run_scenario(with);
    const SimulationResult b = run_scenario(without);
    std::ostringstream d;
    d << "adjustment on: " << (a.fell ? "fell" : "completed") << " (" << a.adjustments.size()
      << " adjustments); adjustment off: " << (b.fell ? "fell" : "completed") << " (max DCM error "
      << b.metrics.max_dcm_error << " m)";
    return {!a.fell && b.fell, d.str()};
}

Outcome c8_height_mismatch() {
    const SimulationResult r = run_height_mismatch(walk10(), 1.0, 1.2);
    std::ostringstream d;
    d << (r.fell ? "fell" : "completed") << ", zmp-in-polygon " << r.metrics.zmp_in_polygon_fraction
      << ", rms sagittal " << r.metrics.rms_dcm_error.x() << " m, frontal " << r.metrics.rms_dcm_error.y() << " m";
    return {!r.fell && r.metrics.steps_completed == 4 && r.metrics.zmp_in_polygon_fraction == 1.0 &&
                r.metrics.rms_dcm_error.y() > r.metrics.rms_dcm_error.x(),
            d.str()};
}

Outcome c9_determinism() {
    auto csv_of = [](const ScenarioConfig& cfg) {
        std::ostringstream o;
        write_csv(o, log_table(run_scenario(cfg).log));
        return o.str();
    };
    ScenarioConfig noisy = walk10();
    noisy.noise.enabled = true;
    noisy.noise.seed = 123;
    ScenarioConfig pushed = with_push(walk10(), PushDirection::Forward, 1000.0);
    pushed.compliance.enabled = true;
    pushed.noise.enabled = true;
    pushed.noise.seed = 7;
    const ScenarioConfig mismatch = height_mismatch_scenario(walk10(), 1.0, 1.2);
    int identical = 0;
    for (const auto& cfg : {noisy, pushed, mismatch}) identical += csv_of(cfg) == csv_of(cfg) ? 1 : 0;
    return {identical == 3, std::to_string(identical) + "/3 scenarios byte-identical on rerun"};
}

Outcome c10_kalman() {
    const double w = std::sqrt(9.81), dt = 0.005;
    const StateSpace ss = build_state_space(w);
    const NoiseModel noise = NoiseModel::truncated(0.05);
    AxisKalmanFilter kf(ss, dt, noise, {{0.0, 0.0}, noise.measurement_cov});
    kf.correct({0.0, 0.0});
    for (int k = 0; k < 1000; ++k) kf.step(0.0, {0.0, 0.0});
    const Eigen::MatrixXd Pstar =
        oracle::dare_posterior(kf.system().A, Eigen::Matrix2d::Identity(), noise.process_cov, noise.measurement_cov);
    const double cov_err = (kf.estimate().cov - Pstar).cwiseAbs().maxCoeff();

    NoiseModel sharp;
    sharp.measurement_cov = 1e-12 * Eigen::Matrix2d::Identity();
    sharp.measurement_bound = 0.0;
    AxisKalmanFilter zero(ss, dt, sharp, {{0.08, -0.05}, 1e-2 * Eigen::Matrix2d::Identity()});
    AxisState truth{0.0, 0.04};
    zero.correct({truth.x, truth.dcm(w)});
    for (int k = 0; k < 50; ++k) {
        truth = integrate(truth, 0.02, 0.0, w, dt);
        zero.step(0.02, {truth.x, truth.dcm(w)});
    }
    const double est_err = (zero.estimate().mean - Eigen::Vector2d(truth.x, truth.dcm(w))).norm();
    std::ostringstream d;
    d << "|P - P_dare| " << cov_err << ", zero-noise error after 50 cycles " << est_err << " m";
    return {cov_err <= 1e-8 && est_err <= 1e-9, d.str()};
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "reference planner exactness", 1.0, c1_planner_exactness},
        {2, "BVP/IVP oracle equivalence", 5.0, c2_bvp_ivp_oracles},
        {3, "Riccati correctness", 5.0, c3_riccati},
        {4, "noise robustness, 20 seeds", 10.0, c4_noise},
        {5, "push grid +-45/70/90 N", 10.0, c5_push_grid},
        {6, "push limits within bands", 20.0, c6_push_limits},
        {7, "step adjustment recovery at 120 N", 5.0, c7_step_adjustment},
        {8, "COM height mismatch", 5.0, c8_height_mismatch},
        {9, "determinism", 5.0, c9_determinism},
        {10, "Kalman steady state", 5.0, c10_kalman},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass = o.pass && in_time;
        failed += pass ? 0 : 1;
        std::printf("%s criterion %d: %s -- %s [%s s, budget %g s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), fmt("%.3f", secs).c_str(), c.budget_s);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
