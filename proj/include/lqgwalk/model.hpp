#pragma once

#include <Eigen/Core>

namespace lqgwalk {

/// Lumped-mass robot description. The defaults describe a 30 kg robot
/// walking with its COM 1 m above the ground on 0.2 m long feet.
struct RobotParams {
    double mass = 30.0;              // kg
    double com_height = 1.0;         // m
    double com_vertical_accel = 0.0; // m/s^2, zero for a constant-height plane
    double gravity = 9.81;           // m/s^2
    double foot_length = 0.2;        // m, sagittal extent
    double foot_width = 0.1;         // m, frontal extent

    /// Throws std::invalid_argument on non-physical values.
    void validate() const;
};

/// COM position and velocity along one decoupled axis.
struct AxisState {
    double x = 0.0;    // m
    double xdot = 0.0; // m/s

    [[nodiscard]] double dcm(double omega) const { return x + xdot / omega; }

    /// Inverse of dcm(): recovers the velocity from a (position, DCM) pair.
    [[nodiscard]] static AxisState from_dcm(double x, double dcm, double omega) {
        return {x, omega * (dcm - x)};
    }
};

struct AxisDerivative {
    double xdot = 0.0;
    double xddot = 0.0;
};

/// d/dt [x, zeta] = A [x, zeta] + B p with measurement y = C [x, zeta].
struct StateSpace {
    double omega = 0.0;
    Eigen::Matrix2d A;
    Eigen::Vector2d B;
    Eigen::Matrix2d C;
};

/// Zero-order-hold discretization of a StateSpace.
struct DiscreteSystem {
    double dt = 0.0;
    Eigen::Matrix2d A;
    Eigen::Vector2d B;
};

/// sqrt((g + zddot) / z). Throws std::domain_error when the pendulum would not
/// have a real, positive natural frequency.
double natural_frequency(const RobotParams& params);

/// zeta = x + xdot / omega
double dcm_of(const AxisState& state, double omega);

/// xddot = omega^2 (x - p) + a_ext
AxisDerivative dynamics_rhs(const AxisState& state, double zmp, double a_ext, double omega);

/// Exact propagation of the pendulum over dt with the ZMP and the external
/// acceleration held constant.
AxisState integrate(const AxisState& state, double zmp, double a_ext, double omega, double dt);

StateSpace build_state_space(double omega);

/// Closed-form matrix exponential of the triangular pendulum system.
DiscreteSystem discretize(const StateSpace& ss, double dt);

} // namespace lqgwalk
