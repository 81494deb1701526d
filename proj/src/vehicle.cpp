#include "targetsearch/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace targetsearch {

namespace {

constexpr double kPitchCosFloor = 1e-9;
constexpr double kConditionLimit = 1e12;

void check_regime(const UavState& s) {
    if (!(s.airspeed > 0.0)) {
        throw std::domain_error("uav model: airspeed must stay positive");
    }
    if (std::abs(std::cos(s.pitch)) < kPitchCosFloor) {
        throw std::domain_error("uav model: pitch singularity (|cos pitch| ~ 0)");
    }
}

Vec3 velocity(const UavState& s, const UavParams& p) {
    const double cb = std::cos(s.heading), sb = std::sin(s.heading);
    const double cg = std::cos(s.pitch), sg = std::sin(s.pitch);
    const double east = p.literal_east_term ? s.airspeed * sb * sg : s.airspeed * sb * cg;
    return Vec3(s.airspeed * cb * cg + p.wind.x(), east + p.wind.y(),
                -s.airspeed * sg + p.wind.z());
}

Eigen::Vector4d attitude_drift(const UavState& s, const UavParams& p) {
    return Eigen::Vector4d(-p.drag / p.mass - p.gravity * std::sin(s.pitch),
                           -(p.gravity / s.airspeed) * std::cos(s.pitch), 0.0,
                           std::sin(s.roll));
}

// Input matrix restricted to the three actuated attitude channels.
Eigen::Matrix3d input_matrix(const UavState& s, const UavParams& p) {
    Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
    g(0, 0) = 1.0 / p.mass;
    g(1, 1) = p.gravity * std::cos(s.roll) / s.airspeed;
    g(2, 2) = p.lift / (p.mass * s.airspeed * std::cos(s.pitch));
    return g;
}

// Jacobian of the velocity w.r.t. (airspeed, heading, pitch); the roll column
// is identically zero and omitted.
Eigen::Matrix3d velocity_jacobian(const UavState& s, const UavParams& p) {
    const double cb = std::cos(s.heading), sb = std::sin(s.heading);
    const double cg = std::cos(s.pitch), sg = std::sin(s.pitch);
    Eigen::Matrix3d jac;
    jac(0, 0) = cb * cg;
    jac(0, 1) = -s.airspeed * sb * cg;
    jac(0, 2) = -s.airspeed * cb * sg;
    if (p.literal_east_term) {
        jac(1, 0) = sb * sg;
        jac(1, 1) = s.airspeed * cb * sg;
        jac(1, 2) = s.airspeed * sb * cg;
    } else {
        jac(1, 0) = sb * cg;
        jac(1, 1) = s.airspeed * cb * cg;
        jac(1, 2) = -s.airspeed * sb * sg;
    }
    jac(2, 0) = -sg;
    jac(2, 1) = 0.0;
    jac(2, 2) = -s.airspeed * cg;
    return jac;
}

using StateVec = Eigen::Matrix<double, 7, 1>;

StateVec pack(const UavState& s) {
    StateVec v;
    v << s.position, s.airspeed, s.heading, s.pitch, s.roll;
    return v;
}

UavState unpack(const StateVec& v) {
    UavState s;
    s.position = v.head<3>();
    s.airspeed = v[3];
    s.heading = v[4];
    s.pitch = v[5];
    s.roll = v[6];
    return s;
}

StateVec deriv_vec(const StateVec& v, const Control& u, const UavParams& p) {
    const UavDeriv d = dynamics_deriv(unpack(v), u, p);
    StateVec out;
    out << d.position_rate, d.attitude_rate;
    return out;
}

}  // namespace

UavDeriv dynamics_deriv(const UavState& state, const Control& control, const UavParams& params) {
    check_regime(state);
    UavDeriv d;
    d.position_rate = velocity(state, params);
    const Eigen::Vector4d drift = attitude_drift(state, params);
    const Eigen::Vector3d actuated = input_matrix(state, params) * control;
    d.attitude_rate << drift[0] + actuated[0], drift[1] + actuated[1], drift[2] + actuated[2],
        drift[3];
    return d;
}

Control backstep_control(const UavState& state, const Vec3& target, const ControlGains& gains,
                         const UavParams& params) {
    check_regime(state);
    const Eigen::Matrix3d jac = velocity_jacobian(state, params);
    const Eigen::Matrix3d channel = jac * input_matrix(state, params);

    const double scale = channel.cwiseAbs().maxCoeff();
    if (!(scale > 0.0) ||
        std::abs(channel.determinant()) < scale * scale * scale / kConditionLimit) {
        throw std::domain_error("tracking control: velocity channel is near-singular");
    }

    const Vec3 vel = velocity(state, params);
    const Vec3 drift = jac * attitude_drift(state, params).head<3>();
    const double rate_gain = gains.gain1 + gains.gain2 + gains.gain3;
    const double position_gain = 1.0 + gains.gain1 * gains.gain2 * gains.gain3;
    const Vec3 rhs = -drift - rate_gain * vel - position_gain * (state.position - target);
    return channel.partialPivLu().solve(rhs);
}

int obstacle_indicator(const Vec3& position, const ObstacleSet& obstacles,
                       double danger_distance) {
    for (const Vec3& o : obstacles.centers) {
        if ((position - o).norm() < danger_distance) return 1;
    }
    return 0;
}

Control apply_avoidance(const Control& control, int indicator, double obstacle_gain) {
    Control out = control;
    out[1] -= obstacle_gain * indicator;
    return out;
}

TrackResult track_to(const UavState& start, const Vec3& target, const ControlGains& gains,
                     const UavParams& params, const ObstacleSet& obstacles,
                     const TrackOptions& options) {
    TrackResult result;
    result.state = start;
    if ((start.position - target).norm() < options.tolerance) {
        result.reached = true;
        return result;
    }

    // Closed-loop derivative: the tracking law is coupled to the plant in
    // continuous time, so the control is re-evaluated at every RK4 stage.
    // Envelope protection clips the commands to actuator ranges and floors
    // the thrust near stall; the raw law is untouched inside its envelope.
    const auto closed_loop = [&](const StateVec& v) {
        const UavState s = unpack(v);
        Control u = apply_avoidance(
            backstep_control(s, target, gains, params),
            obstacle_indicator(s.position, obstacles, gains.danger_distance),
            gains.obstacle_gain);
        for (int c = 0; c < 3; ++c) {
            u[c] = std::clamp(u[c], -params.control_limits[c], params.control_limits[c]);
        }
        const double hold_thrust =
            params.drag + params.mass * params.gravity * std::sin(s.pitch);
        if (s.airspeed < params.airspeed_floor) u[0] = std::max(u[0], hold_thrust);
        if (s.airspeed > params.airspeed_ceiling) u[0] = std::min(u[0], hold_thrust);
        if (s.pitch > params.pitch_limit) u[2] = std::min(u[2], 0.0);
        if (s.pitch < -params.pitch_limit) u[2] = std::max(u[2], 0.0);
        return deriv_vec(v, u, params);
    };

    const int max_steps = static_cast<int>(std::ceil(options.t_max / options.dt));
    StateVec v = pack(start);
    for (int step = 0; step < max_steps; ++step) {
        try {
            const double dt = options.dt;
            const StateVec k1 = closed_loop(v);
            const StateVec k2 = closed_loop(v + 0.5 * dt * k1);
            const StateVec k3 = closed_loop(v + 0.5 * dt * k2);
            const StateVec k4 = closed_loop(v + dt * k3);
            v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        } catch (const std::domain_error&) {
            result.singular = true;
            break;
        }
        result.state = unpack(v);
        result.trajectory.push_back(result.state.position);
        if ((result.state.position - target).norm() < options.tolerance) {
            result.reached = true;
            break;
        }
    }
    return result;
}

Vec3 kinematic_move(const Vec3& /*position*/, const Vec3& target) { return target; }

}  // namespace targetsearch
