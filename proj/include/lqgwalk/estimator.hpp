#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

#include "lqgwalk/model.hpp"

namespace lqgwalk {

using Rng = std::mt19937_64;

/// Kalman filter noise description for one axis over the [x, zeta] state.
struct NoiseModel {
    Eigen::Matrix2d process_cov = Eigen::Matrix2d::Identity() * 1e-6;     // m^2 per control step
    Eigen::Matrix2d measurement_cov = Eigen::Matrix2d::Identity() * (0.05 / 3.0) * (0.05 / 3.0); // m^2
    double measurement_bound = 0.05; // m, truncation half-width, 0 = untruncated

    /// Bounded-noise model: sigma = bound / 3 on both channels.
    static NoiseModel truncated(double bound, double process_var = 1e-6);

    /// Checks the symmetry/definiteness requirements of the filter.
    void validate() const;
};

struct AxisEstimate {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero(); // [x, zeta]
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
};

AxisEstimate predict(const AxisEstimate& est, const DiscreteSystem& sys, double u, const Eigen::Matrix2d& process_cov);

/// Joseph-form measurement update. Throws std::runtime_error when the
/// innovation covariance is singular.
AxisEstimate update(const AxisEstimate& est, const Eigen::Vector2d& y, const Eigen::Matrix2d& C,
                    const Eigen::Matrix2d& measurement_cov);

/// y = [x, zeta] + v with v zero-mean Gaussian of standard deviation
/// sqrt(diag(measurement_cov)), each channel rejection-truncated to
/// +/- measurement_bound when the bound is positive.
Eigen::Vector2d sample_measurement(const AxisState& truth, double omega, const NoiseModel& noise, Rng& rng);

/// Predict/update loop for one axis running at a fixed period.
class AxisKalmanFilter {
public:
    AxisKalmanFilter(const StateSpace& ss, double dt, NoiseModel noise, AxisEstimate initial);

    /// Propagates with the input applied over the last period, then fuses y.
    const AxisEstimate& step(double u_applied, const Eigen::Vector2d& y);
    /// Measurement-only update (first cycle).
    const AxisEstimate& correct(const Eigen::Vector2d& y);

    [[nodiscard]] const AxisEstimate& estimate() const { return est_; }
    [[nodiscard]] const DiscreteSystem& system() const { return sys_; }

private:
    DiscreteSystem sys_;
    Eigen::Matrix2d C_;
    NoiseModel noise_;
    AxisEstimate est_;
};

} // namespace lqgwalk
