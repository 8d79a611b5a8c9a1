#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lqgwalk/estimator.hpp"
#include "oracles.hpp"

using namespace lqgwalk;

namespace {
const double kOmega = std::sqrt(9.81);
const double kDt = 0.005;
} // namespace

TEST(Predict, EquilibriumAndCovariance) {
    const DiscreteSystem d = discretize(build_state_space(kOmega), kDt);
    AxisEstimate est{{0.3, 0.3}, Eigen::Matrix2d::Zero()};
    const AxisEstimate out = predict(est, d, 0.3, Eigen::Matrix2d::Zero());
    EXPECT_NEAR((out.mean - est.mean).norm(), 0.0, 1e-15);

    const AxisEstimate q = predict(est, d, 0.3, 2e-6 * Eigen::Matrix2d::Identity());
    EXPECT_EQ(q.cov, 2e-6 * Eigen::Matrix2d::Identity());
}

TEST(Predict, SymmetryOnRandomEstimates) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 1.0);
    const DiscreteSystem d = discretize(build_state_space(kOmega), kDt);
    for (int i = 0; i < 200; ++i) {
        Eigen::Matrix2d L;
        L << n(rng), 0, n(rng), n(rng);
        AxisEstimate est{{n(rng), n(rng)}, L * L.transpose()};
        const AxisEstimate out = predict(est, d, n(rng), 1e-6 * Eigen::Matrix2d::Identity());
        EXPECT_LE((out.cov - out.cov.transpose()).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Update, LimitsOfMeasurementNoise) {
    const AxisEstimate prior{{0.1, 0.2}, 1e-2 * Eigen::Matrix2d::Identity()};
    const Eigen::Vector2d y(0.15, 0.12);
    const AxisEstimate sharp = update(prior, y, Eigen::Matrix2d::Identity(), 1e-14 * Eigen::Matrix2d::Identity());
    EXPECT_NEAR((sharp.mean - y).norm(), 0.0, 1e-10);
    const AxisEstimate vague = update(prior, y, Eigen::Matrix2d::Identity(), 1e10 * Eigen::Matrix2d::Identity());
    EXPECT_NEAR((vague.mean - prior.mean).norm(), 0.0, 1e-12);
}

TEST(Update, SingularInnovationThrows) {
    const AxisEstimate prior{{0.0, 0.0}, Eigen::Matrix2d::Zero()};
    EXPECT_THROW(update(prior, {0, 0}, Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Zero()), std::runtime_error);
}

TEST(Update, TraceNonIncreasing) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        Eigen::Matrix2d L;
        L << u(rng), 0, u(rng), u(rng);
        const AxisEstimate prior{{u(rng), u(rng)}, L * L.transpose() + 1e-6 * Eigen::Matrix2d::Identity()};
        const AxisEstimate post = update(prior, {u(rng), u(rng)}, Eigen::Matrix2d::Identity(),
                                         NoiseModel{}.measurement_cov);
        EXPECT_LE(post.cov.trace(), prior.cov.trace() + 1e-15);
    }
}

TEST(Kalman, SteadyStateMatchesDareFixedPoint) {
    const StateSpace ss = build_state_space(kOmega);
    const NoiseModel noise;
    AxisKalmanFilter kf(ss, kDt, noise, {{0.0, 0.0}, noise.measurement_cov});
    kf.correct({0.0, 0.0});
    for (int k = 0; k < 1000; ++k) kf.step(0.0, {0.0, 0.0});
    const Eigen::MatrixXd P = oracle::dare_posterior(kf.system().A, Eigen::Matrix2d::Identity(), noise.process_cov,
                                                     noise.measurement_cov);
    EXPECT_LE((kf.estimate().cov - P).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Kalman, ZeroNoiseConvergesToTruth) {
    // Sharp sensors: the estimate locks on to the noiseless measurements.
    const StateSpace ss = build_state_space(kOmega);
    NoiseModel noise;
    noise.measurement_cov = 1e-12 * Eigen::Matrix2d::Identity();
    noise.measurement_bound = 0.0;
    AxisKalmanFilter kf(ss, kDt, noise, {{0.1, -0.1}, 1e-2 * Eigen::Matrix2d::Identity()});
    AxisState truth{0.0, 0.05};
    const double u = 0.01;
    kf.correct({truth.x, truth.dcm(kOmega)});
    for (int k = 0; k < 50; ++k) {
        truth = integrate(truth, u, 0.0, kOmega, kDt);
        kf.step(u, {truth.x, truth.dcm(kOmega)});
    }
    EXPECT_LE((kf.estimate().mean - Eigen::Vector2d(truth.x, truth.dcm(kOmega))).norm(), 1e-9);
}

TEST(Kalman, UnbiasedUnderUntruncatedNoise) {
    const StateSpace ss = build_state_space(kOmega);
    NoiseModel noise;
    noise.measurement_bound = 0.0;
    const AxisState truth{0.1, 0.0}; // rests over the ZMP at 0.1
    Rng rng(42);
    const int runs = 10000;
    Eigen::Vector2d sum = Eigen::Vector2d::Zero(), sq = Eigen::Vector2d::Zero();
    for (int r = 0; r < runs; ++r) {
        AxisKalmanFilter kf(ss, kDt, noise, {{0.1, 0.1}, noise.measurement_cov});
        kf.correct(sample_measurement(truth, kOmega, noise, rng));
        for (int k = 0; k < 10; ++k) kf.step(0.1, sample_measurement(truth, kOmega, noise, rng));
        const Eigen::Vector2d e = kf.estimate().mean - Eigen::Vector2d(truth.x, truth.dcm(kOmega));
        sum += e;
        sq += e.cwiseProduct(e);
    }
    const Eigen::Vector2d mean = sum / runs;
    const Eigen::Vector2d se = ((sq / runs - mean.cwiseProduct(mean)) / runs).cwiseSqrt();
    EXPECT_LE(std::abs(mean[0]), 3 * se[0]);
    EXPECT_LE(std::abs(mean[1]), 3 * se[1]);
}

TEST(SampleMeasurement, TruncatedStatistics) {
    const NoiseModel noise = NoiseModel::truncated(0.05);
    Rng rng(1);
    const AxisState truth{0.0, 0.0};
    const int n = 100000;
    double s0 = 0, s1 = 0, q0 = 0, q1 = 0, worst = 0;
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector2d y = sample_measurement(truth, kOmega, noise, rng);
        worst = std::max(worst, y.cwiseAbs().maxCoeff());
        s0 += y[0], s1 += y[1], q0 += y[0] * y[0], q1 += y[1] * y[1];
    }
    EXPECT_LE(worst, 0.05);
    const double sigma = 0.05 / 3.0;
    EXPECT_NEAR(std::sqrt(q0 / n - (s0 / n) * (s0 / n)), sigma, 0.05 * sigma);
    EXPECT_NEAR(std::sqrt(q1 / n - (s1 / n) * (s1 / n)), sigma, 0.05 * sigma);
}

TEST(SampleMeasurement, ZeroNoiseAndDeterminism) {
    NoiseModel zero;
    zero.measurement_cov.setZero();
    zero.measurement_bound = 0.0;
    Rng rng(3);
    const AxisState truth{0.2, 0.4};
    EXPECT_EQ(sample_measurement(truth, kOmega, zero, rng), Eigen::Vector2d(0.2, truth.dcm(kOmega)));

    Rng a(77), b(77);
    const NoiseModel noise;
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(sample_measurement(truth, kOmega, noise, a), sample_measurement(truth, kOmega, noise, b));
    }
}

TEST(NoiseModel, Validation) {
    NoiseModel m;
    EXPECT_NO_THROW(m.validate());
    m.measurement_cov(0, 0) = 0.0;
    EXPECT_THROW(m.validate(), std::invalid_argument);
    m = NoiseModel{};
    m.process_cov(0, 1) = 1.0;
    EXPECT_THROW(m.validate(), std::invalid_argument);
}
