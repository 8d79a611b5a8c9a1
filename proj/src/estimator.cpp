#include "lqgwalk/estimator.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace lqgwalk {

namespace {

Eigen::Matrix2d symmetrize(const Eigen::Matrix2d& m) { return 0.5 * (m + m.transpose()); }

bool is_symmetric(const Eigen::Matrix2d& m) { return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12; }

double min_eigenvalue(const Eigen::Matrix2d& m) {
    return Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(symmetrize(m)).eigenvalues().minCoeff();
}

double truncated_normal(double sigma, double bound, Rng& rng) {
    if (sigma <= 0.0) return 0.0;
    std::normal_distribution<double> dist(0.0, sigma);
    if (bound <= 0.0) return dist(rng);
    for (;;) {
        const double v = dist(rng);
        if (std::abs(v) <= bound) return v;
    }
}

} // namespace

NoiseModel NoiseModel::truncated(double bound, double process_var) {
    NoiseModel n;
    const double sigma = bound / 3.0;
    n.process_cov = Eigen::Matrix2d::Identity() * process_var;
    n.measurement_cov = Eigen::Matrix2d::Identity() * sigma * sigma;
    n.measurement_bound = bound;
    return n;
}

void NoiseModel::validate() const {
    if (!is_symmetric(process_cov) || min_eigenvalue(process_cov) < -1e-15) {
        throw std::invalid_argument("noise.process_cov must be symmetric positive semi-definite");
    }
    if (!is_symmetric(measurement_cov) || !(min_eigenvalue(measurement_cov) > 0.0)) {
        throw std::invalid_argument("noise.measurement_cov must be symmetric positive definite");
    }
    if (!(measurement_bound >= 0.0)) throw std::invalid_argument("noise.measurement_bound must be non-negative");
}

AxisEstimate predict(const AxisEstimate& est, const DiscreteSystem& sys, double u, const Eigen::Matrix2d& process_cov) {
    AxisEstimate out;
    out.mean = sys.A * est.mean + sys.B * u;
    out.cov = symmetrize(sys.A * est.cov * sys.A.transpose() + process_cov);
    return out;
}

AxisEstimate update(const AxisEstimate& est, const Eigen::Vector2d& y, const Eigen::Matrix2d& C,
                    const Eigen::Matrix2d& measurement_cov) {
    const Eigen::Matrix2d S = C * est.cov * C.transpose() + measurement_cov;
    const Eigen::FullPivLU<Eigen::Matrix2d> lu(S);
    if (!lu.isInvertible() || !std::isfinite(S.determinant())) {
        throw std::runtime_error("kalman update: singular innovation covariance");
    }
    const Eigen::Matrix2d K = est.cov * C.transpose() * lu.inverse();
    const Eigen::Matrix2d I_KC = Eigen::Matrix2d::Identity() - K * C;
    AxisEstimate out;
    out.mean = est.mean + K * (y - C * est.mean);
    out.cov = symmetrize(I_KC * est.cov * I_KC.transpose() + K * measurement_cov * K.transpose());
    return out;
}

Eigen::Vector2d sample_measurement(const AxisState& truth, double omega, const NoiseModel& noise, Rng& rng) {
    Eigen::Vector2d y(truth.x, truth.dcm(omega));
    for (int c = 0; c < 2; ++c) {
        y(c) += truncated_normal(std::sqrt(std::max(noise.measurement_cov(c, c), 0.0)), noise.measurement_bound, rng);
    }
    return y;
}

AxisKalmanFilter::AxisKalmanFilter(const StateSpace& ss, double dt, NoiseModel noise, AxisEstimate initial)
    : sys_(discretize(ss, dt)), C_(ss.C), noise_(std::move(noise)), est_(std::move(initial)) {
    noise_.validate();
}

const AxisEstimate& AxisKalmanFilter::step(double u_applied, const Eigen::Vector2d& y) {
    est_ = update(predict(est_, sys_, u_applied, noise_.process_cov), y, C_, noise_.measurement_cov);
    return est_;
}

const AxisEstimate& AxisKalmanFilter::correct(const Eigen::Vector2d& y) {
    est_ = update(est_, y, C_, noise_.measurement_cov);
    return est_;
}

} // namespace lqgwalk
