#include "lqgwalk/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lqgwalk {

namespace {

void require_omega(double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw std::domain_error("natural frequency must be finite and positive, got " +
                                std::to_string(omega));
    }
}

} // namespace

void RobotParams::validate() const {
    if (!(mass > 0.0)) throw std::invalid_argument("robot.mass must be positive");
    if (!(com_height > 0.0)) throw std::invalid_argument("robot.com_height must be positive");
    if (!(gravity > 0.0)) throw std::invalid_argument("robot.gravity must be positive");
    if (!(gravity + com_vertical_accel > 0.0)) {
        throw std::invalid_argument("robot.gravity + robot.com_vertical_accel must be positive");
    }
    if (!(foot_length > 0.0)) throw std::invalid_argument("robot.foot_length must be positive");
    if (!(foot_width > 0.0)) throw std::invalid_argument("robot.foot_width must be positive");
}

double natural_frequency(const RobotParams& params) {
    const double num = params.gravity + params.com_vertical_accel;
    if (!(params.com_height > 0.0) || !(num > 0.0)) {
        throw std::domain_error("pendulum has no real natural frequency (need z > 0 and g + zddot > 0)");
    }
    return std::sqrt(num / params.com_height);
}

double dcm_of(const AxisState& state, double omega) {
    require_omega(omega);
    if (!std::isfinite(state.x) || !std::isfinite(state.xdot)) {
        throw std::domain_error("dcm_of: non-finite state");
    }
    return state.dcm(omega);
}

AxisDerivative dynamics_rhs(const AxisState& state, double zmp, double a_ext, double omega) {
    return {state.xdot, omega * omega * (state.x - zmp) + a_ext};
}

AxisState integrate(const AxisState& state, double zmp, double a_ext, double omega, double dt) {
    require_omega(omega);
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    // A constant external acceleration shifts the equilibrium point.
    const double offset = zmp - a_ext / (omega * omega);
    const double dx = state.x - offset;
    const double c = std::cosh(omega * dt);
    const double s = std::sinh(omega * dt);
    return {offset + dx * c + state.xdot / omega * s, dx * omega * s + state.xdot * c};
}

StateSpace build_state_space(double omega) {
    require_omega(omega);
    StateSpace ss;
    ss.omega = omega;
    ss.A << -omega, omega,
             0.0,   omega;
    ss.B << 0.0, -omega;
    ss.C.setIdentity();
    return ss;
}

DiscreteSystem discretize(const StateSpace& ss, double dt) {
    require_omega(ss.omega);
    if (!(dt > 0.0)) throw std::invalid_argument("discretize: dt must be positive");
    const double decay = std::exp(-ss.omega * dt);
    const double growth = std::exp(ss.omega * dt);
    const double sh = 0.5 * (growth - decay);
    DiscreteSystem d;
    d.dt = dt;
    // x(t)    = p + (x0 - p) e^{-wt} + (zeta0 - p) sinh(wt)
    // zeta(t) = p + (zeta0 - p) e^{wt}
    d.A << decay, sh,
           0.0,   growth;
    d.B << 1.0 - decay - sh, 1.0 - growth;
    return d;
}

} // namespace lqgwalk
