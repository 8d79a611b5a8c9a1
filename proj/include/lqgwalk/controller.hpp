#pragma once

#include <Eigen/Core>

#include "lqgwalk/estimator.hpp"
#include "lqgwalk/model.hpp"
#include "lqgwalk/planner.hpp"

namespace lqgwalk {

/// Quadratic cost over the integrator-augmented state [x, zeta, x_i].
struct LqrWeights {
    Eigen::Matrix3d Q = Eigen::Vector3d(10.0, 100.0, 50.0).asDiagonal();
    double R = 1.0;

    void validate() const;
};

struct AugmentedSystem {
    Eigen::Matrix3d A;
    Eigen::Vector3d B;
};

/// Appends the integral of the DCM error as a third state.
AugmentedSystem augment_with_integrator(const StateSpace& ss);

struct CareSolution {
    Eigen::MatrixXd P;
    double residual = 0.0; // max-abs entry of A'P + PA - PBR^-1B'P + Q
    int iterations = 0;
};

/// Continuous algebraic Riccati equation by Newton-Kleinman iteration, seeded
/// with a pole-placement gain. Throws std::invalid_argument for a pair that
/// cannot be stabilized and std::runtime_error if the iteration fails.
CareSolution solve_care(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& Q,
                        const Eigen::MatrixXd& R);

/// Solves A'X + XA + M = 0 for symmetric X (A Hurwitz).
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M);

/// Gain placing the eigenvalues of A - B K at the given real locations
/// (single input).
Eigen::RowVectorXd place_poles(const Eigen::MatrixXd& A, const Eigen::VectorXd& B, const Eigen::VectorXd& poles);

/// Largest real part of the eigenvalues of A.
double spectral_abscissa(const Eigen::MatrixXd& A);

constexpr double kCareResidualTolerance = 1e-8;

/// K = R^-1 B' P. Throws if the Riccati residual exceeds
/// kCareResidualTolerance or the closed loop is not strictly stable.
Eigen::RowVector3d lqr_gain(const AugmentedSystem& sys, const LqrWeights& weights);

struct ControllerState {
    Eigen::RowVector3d gain = Eigen::RowVector3d::Zero();
    double integrator = 0.0;          // m s
    double integrator_previous = 0.0; // value before the last control_step

    /// Anti-windup: discard the integration done by the last control_step.
    void freeze_integrator() { integrator = integrator_previous; }
};

struct AxisReference {
    double com = 0.0;
    double dcm = 0.0;
    double zmp = 0.0; // feedforward
};

/// Integrates the DCM error and returns the unsaturated ZMP command
/// p_ff - K [x~ - x_des, zeta~ - zeta_des, x_i].
double control_step(ControllerState& ctrl, const AxisEstimate& est, const AxisReference& ref, double dt);

/// Clamps u into [center - half_extent, center + half_extent]. Non-finite
/// input throws std::domain_error.
double saturate_zmp(double u, double support_center, double half_extent);

/// Axis-aligned support region.
struct SupportBox {
    Eigen::Vector2d lo;
    Eigen::Vector2d hi;

    [[nodiscard]] Eigen::Vector2d center() const { return 0.5 * (lo + hi); }
    [[nodiscard]] Eigen::Vector2d half_extent() const { return 0.5 * (hi - lo); }
    [[nodiscard]] bool contains(const Eigen::Vector2d& p) const {
        return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
    }
};

/// The support foot footprint in single support, the per-axis hull over both
/// feet in double support.
SupportBox support_polygon(const FootstepPlan& plan, const StepParams& params, const RobotParams& robot, double t);

} // namespace lqgwalk
