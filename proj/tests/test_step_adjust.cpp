#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lqgwalk/model.hpp"
#include "lqgwalk/step_adjust.hpp"
#include "oracles.hpp"

using namespace lqgwalk;

namespace {
const double kOmega = std::sqrt(9.81);
}

TEST(PredictNextFootstep, Examples) {
    EXPECT_EQ(predict_next_footstep(0.1, 0.3, 1.0, 1.0, kOmega), 0.3);
    EXPECT_EQ(predict_next_footstep(0.1, 0.1, 0.2, 1.0, kOmega), 0.1);
    const double p = predict_next_footstep(0.0, 0.05, 0.5, 1.0, 3.13209);
    EXPECT_NEAR(p, 0.05 * std::exp(3.13209 * 0.5), 1e-15);
    EXPECT_NEAR(p, oracle::rk4_dcm(0.05, 0.0, 3.13209, 0.5, 1000), 1e-12);
    EXPECT_THROW(predict_next_footstep(0.0, 0.0, 1.1, 1.0, kOmega), std::invalid_argument);
}

TEST(PredictNextFootstep, AgreesWithRk4OnRandomStates) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> pos(-0.3, 0.3), rem(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double p = pos(rng), z = pos(rng), T = rem(rng);
        EXPECT_NEAR(predict_next_footstep(p, z, 0.0, T, kOmega), oracle::rk4_dcm(z, p, kOmega, T, 4000), 1e-9);
    }
}

TEST(PredictNextFootstep, AgreesWithPlant) {
    const AxisState s{0.12, 0.2};
    const double p = 0.1, t = 0.35, T = 1.0;
    AxisState x = s;
    for (int k = 0; k < 650; ++k) x = integrate(x, p, 0.0, kOmega, 0.001);
    EXPECT_NEAR(x.dcm(kOmega), predict_next_footstep(p, s.dcm(kOmega), t, T, kOmega), 1e-9);
}

TEST(ComplianceOffset, Examples) {
    ComplianceConfig cfg;
    EXPECT_EQ(compliance_offset(0.02, cfg), 0.0);
    EXPECT_NEAR(compliance_offset(0.1, cfg), 0.09, 1e-15);
    EXPECT_NEAR(compliance_offset(-0.1, cfg), -0.09, 1e-15);
    cfg.max_offset = 0.3;
    EXPECT_EQ(compliance_offset(10.0, cfg), 0.3);
    EXPECT_EQ(compliance_offset(-10.0, cfg), -0.3);
}

TEST(ComplianceOffset, DeadZoneContinuityMonotonicity) {
    const ComplianceConfig cfg;
    for (double e = -cfg.margin; e <= cfg.margin; e += cfg.margin / 50) EXPECT_EQ(compliance_offset(e, cfg), 0.0);
    EXPECT_EQ(compliance_offset(cfg.margin, cfg), 0.0);
    EXPECT_LE(std::abs(compliance_offset(cfg.margin + 1e-12, cfg)), 2e-12);
    double prev = compliance_offset(-1.0, cfg);
    for (double e = -1.0; e <= 1.0; e += 1e-3) {
        const double v = compliance_offset(e, cfg);
        EXPECT_GE(v, prev);
        EXPECT_EQ(v, -compliance_offset(-e, cfg));
        prev = v;
    }
}

TEST(ComplianceConfig, Validation) {
    ComplianceConfig cfg;
    cfg.max_offset = cfg.margin;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = ComplianceConfig{};
    cfg.slope = -1.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(AdjustPlan, ShiftsAllUpcomingSteps) {
    StepParams p;
    p.n_steps = 10;
    const FootstepPlan plan = plan_footsteps(p, {});
    const auto out = adjust_plan(plan, 2, {0.09, 0.0}, 2.3, 0.05);
    ASSERT_TRUE(out);
    for (int i = 0; i <= 2; ++i) EXPECT_EQ(out->steps[i].pos, plan.steps[i].pos);
    for (int i = 3; i < 10; ++i) {
        EXPECT_NEAR(out->steps[i].pos.x() - plan.steps[i].pos.x(), 0.09, 1e-15);
        EXPECT_EQ(out->steps[i].pos.y(), plan.steps[i].pos.y());
    }
    EXPECT_NEAR(out->end_stance.pos.x() - plan.end_stance.pos.x(), 0.09, 1e-15);
    EXPECT_EQ(out->start_stance.pos, plan.start_stance.pos);
}

TEST(AdjustPlan, ZeroOffsetAndFreezeWindow) {
    StepParams p;
    const FootstepPlan plan = plan_footsteps(p, {});
    const auto same = adjust_plan(plan, 4, Eigen::Vector2d::Zero(), 4.2, 0.05);
    ASSERT_TRUE(same);
    for (int i = -1; i <= plan.size(); ++i) EXPECT_EQ(same->placement(i).pos, plan.placement(i).pos);
    EXPECT_FALSE(adjust_plan(plan, 4, {0.1, 0.0}, 4.97, 0.05));
    EXPECT_FALSE(adjust_plan(plan, plan.size() - 1, {0.1, 0.0}, 9.2, 0.05));
    EXPECT_THROW(adjust_plan(plan, 10, {0.1, 0.0}, 9.2, 0.05), std::out_of_range);
}

TEST(ClampFrontalOffset, KeepsFeetApart) {
    // Left swing foot planned at +0.05, support at -0.05.
    EXPECT_EQ(clamp_frontal_offset(0.02, -0.05, 0.05, Side::Left, 0.05), 0.02);
    const double clamped = clamp_frontal_offset(-0.2, -0.05, 0.05, Side::Left, 0.05);
    EXPECT_NEAR(0.05 + clamped - (-0.05), 0.05, 1e-15);
    const double right = clamp_frontal_offset(0.2, 0.05, -0.05, Side::Right, 0.05);
    EXPECT_NEAR(0.05 - (-0.05 + right), 0.05, 1e-15);
}
