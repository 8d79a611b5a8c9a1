#include "lqgwalk/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

namespace lqgwalk {

void LqrWeights::validate() const {
    if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw std::invalid_argument("lqr.Q must be symmetric");
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(Q).eigenvalues().minCoeff();
    if (min_eig < -1e-12) throw std::invalid_argument("lqr.Q must be positive semi-definite");
    if (!(R > 0.0)) throw std::invalid_argument("lqr.R must be positive");
}

AugmentedSystem augment_with_integrator(const StateSpace& ss) {
    AugmentedSystem aug;
    aug.A.setZero();
    aug.A.topLeftCorner<2, 2>() = ss.A;
    aug.A(2, 1) = 1.0; // xi_dot = zeta error
    aug.B << ss.B, 0.0;
    return aug;
}

double spectral_abscissa(const Eigen::MatrixXd& A) {
    return Eigen::EigenSolver<Eigen::MatrixXd>(A, false).eigenvalues().real().maxCoeff();
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M) {
    const Eigen::Index n = A.rows();
    const Eigen::Index unknowns = n * (n + 1) / 2;
    auto index = [n](Eigen::Index i, Eigen::Index j) {
        if (i > j) std::swap(i, j);
        return i * n - i * (i - 1) / 2 + (j - i);
    };
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(unknowns, unknowns);
    Eigen::VectorXd rhs(unknowns);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = r; c < n; ++c) {
            const Eigen::Index row = index(r, c);
            // (A'X)(r,c) + (XA)(r,c)
            for (Eigen::Index k = 0; k < n; ++k) {
                L(row, index(k, c)) += A(k, r);
                L(row, index(r, k)) += A(k, c);
            }
            rhs(row) = -0.5 * (M(r, c) + M(c, r));
        }
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(L);
    if (!lu.isInvertible()) throw std::runtime_error("lyapunov: singular operator");
    const Eigen::VectorXd sol = lu.solve(rhs);
    Eigen::MatrixXd X(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) X(i, j) = sol(index(i, j));
    return X;
}

Eigen::RowVectorXd place_poles(const Eigen::MatrixXd& A, const Eigen::VectorXd& B, const Eigen::VectorXd& poles) {
    const Eigen::Index n = A.rows();
    Eigen::MatrixXd ctrb(n, n);
    ctrb.col(0) = B;
    for (Eigen::Index k = 1; k < n; ++k) ctrb.col(k) = A * ctrb.col(k - 1);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(ctrb);
    lu.setThreshold(1e-10);
    if (lu.rank() < n) throw std::invalid_argument("place_poles: pair is not controllable");
    // Ackermann: K = e_n' C^-1 phi(A)
    Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index k = 0; k < poles.size(); ++k) phi = phi * (A - poles(k) * Eigen::MatrixXd::Identity(n, n));
    Eigen::RowVectorXd last = Eigen::RowVectorXd::Zero(n);
    last(n - 1) = 1.0;
    return last * lu.inverse() * phi;
}

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Eigen::MatrixXd initial_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    const Eigen::Index n = A.rows();
    if (spectral_abscissa(A) < 0.0) return Eigen::MatrixXd::Zero(B.cols(), n);
    if (B.cols() != 1) {
        throw std::invalid_argument("solve_care: initial stabilizing gain only available for single-input systems");
    }
    const double radius =
        Eigen::EigenSolver<Eigen::MatrixXd>(A, false).eigenvalues().cwiseAbs().maxCoeff();
    Eigen::VectorXd poles(n);
    for (Eigen::Index k = 0; k < n; ++k) poles(k) = -(radius + 1.0) * (1.0 + 0.25 * static_cast<double>(k));
    try {
        return place_poles(A, B.col(0), poles);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("solve_care: (A, B) is not stabilizable");
    }
}

} // namespace

CareSolution solve_care(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& Q,
                        const Eigen::MatrixXd& R) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n || R.rows() != B.cols() ||
        R.cols() != B.cols()) {
        throw std::invalid_argument("solve_care: dimension mismatch");
    }
    const Eigen::MatrixXd R_inv = R.inverse();
    Eigen::MatrixXd K = initial_gain(A, B);
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);

    // Quadratic convergence stalls at round-off; stop on stagnation and judge by the residual.
    constexpr int kMaxIterations = 100;
    CareSolution out;
    double prev_change = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= kMaxIterations; ++it) {
        const Eigen::MatrixXd closed = A - B * K;
        if (!(spectral_abscissa(closed) < 0.0)) throw std::runtime_error("solve_care: iterate lost stability");
        const Eigen::MatrixXd next = solve_lyapunov(closed, Q + K.transpose() * R * K);
        const double change = max_abs(next - P);
        P = 0.5 * (next + next.transpose());
        K = R_inv * B.transpose() * P;
        out.iterations = it;
        if (!P.allFinite()) throw std::runtime_error("solve_care: iteration diverged");
        const double scale = std::max(1.0, max_abs(P));
        if (change <= 1e-14 * scale) break;
        if (change <= 1e-8 * scale && change >= 0.5 * prev_change) break;
        prev_change = change;
    }
    out.P = P;
    out.residual = max_abs(A.transpose() * P + P * A - P * B * R_inv * B.transpose() * P + Q);
    const double scale = std::max({1.0, max_abs(Q), max_abs(A.transpose() * P)});
    if (!(out.residual <= 1e-9 * scale)) throw std::runtime_error("solve_care: no convergence");
    return out;
}

Eigen::RowVector3d lqr_gain(const AugmentedSystem& sys, const LqrWeights& weights) {
    weights.validate();
    const Eigen::MatrixXd R = Eigen::MatrixXd::Constant(1, 1, weights.R);
    const CareSolution care = solve_care(sys.A, sys.B, weights.Q, R);
    if (care.residual > kCareResidualTolerance) {
        throw std::runtime_error("lqr_gain: Riccati residual above tolerance");
    }
    const Eigen::RowVector3d K = (sys.B.transpose() * care.P) / weights.R;
    if (!(spectral_abscissa(sys.A - sys.B * K) < 0.0)) throw std::runtime_error("lqr_gain: closed loop unstable");
    return K;
}

double control_step(ControllerState& ctrl, const AxisEstimate& est, const AxisReference& ref, double dt) {
    const double dcm_error = est.mean(1) - ref.dcm;
    ctrl.integrator_previous = ctrl.integrator;
    ctrl.integrator += dcm_error * dt;
    const Eigen::Vector3d deviation(est.mean(0) - ref.com, dcm_error, ctrl.integrator);
    return ref.zmp - ctrl.gain.dot(deviation);
}

double saturate_zmp(double u, double support_center, double half_extent) {
    if (!std::isfinite(u)) throw std::domain_error("saturate_zmp: non-finite command");
    if (!(half_extent > 0.0)) throw std::invalid_argument("saturate_zmp: half extent must be positive");
    return std::clamp(u, support_center - half_extent, support_center + half_extent);
}

SupportBox support_polygon(const FootstepPlan& plan, const StepParams& params, const RobotParams& robot, double t) {
    const Eigen::Vector2d half(0.5 * robot.foot_length, 0.5 * robot.foot_width);
    const int i = std::clamp(static_cast<int>(std::floor(t / params.step_duration)), 0, plan.size() - 1);
    const Eigen::Vector2d& here = plan.placement(i).pos;
    SupportBox box{here - half, here + half};
    const double local = t - params.step_duration * i;
    if (params.double_support > 0.0 && local >= params.single_support) {
        const Eigen::Vector2d& next = plan.placement(i + 1).pos;
        box.lo = box.lo.cwiseMin(next - half);
        box.hi = box.hi.cwiseMax(next + half);
    }
    return box;
}

} // namespace lqgwalk
