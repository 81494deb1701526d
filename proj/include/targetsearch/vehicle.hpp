#pragma once

#include <vector>

#include "targetsearch/geometry.hpp"

namespace targetsearch {

/// Fixed-wing style UAV state in the north-east-down frame: position plus
/// airspeed, heading, pitch and roll.
struct UavState {
    Vec3 position = Vec3::Zero();
    double airspeed = 15.0;  // > 0, m/s
    double heading = 0.0;    // rad
    double pitch = 0.0;      // rad
    double roll = 0.0;       // rad
};

struct UavParams {
    double mass = 10.0;     // kg
    double gravity = 9.8;   // m/s^2
    double drag = 0.9;      // N
    double lift = 0.7;      // N
    Vec3 wind = Vec3::Zero();  // m/s, NED
    // The literal model's east velocity vanishes in level flight, which makes
    // planar tracking impossible; the corrected kinematics are the default and
    // this flag restores the literal form for fidelity studies.
    bool literal_east_term = false;
    // Flight-envelope protection used when the tracking law is integrated:
    // the raw law demands unbounded accelerations on fresh waypoint errors,
    // so commands are clipped to actuator ranges and thrust is cut between
    // the stall floor and the airframe ceiling.
    Eigen::Vector3d control_limits{200.0, 15.0, 150.0};
    double airspeed_floor = 2.0;    // m/s
    double airspeed_ceiling = 20.0; // m/s
    double pitch_limit = 1.2;       // rad, keeps the model away from |pitch| = pi/2
};

struct ControlGains {
    double gain1 = 9.0;
    double gain2 = 9.0;
    double gain3 = 9.0;
    double obstacle_gain = 5.0;     // heading bias when the danger indicator fires
    double danger_distance = 6.0;   // m
};

struct ObstacleSet {
    std::vector<Vec3> centers;
    double collision_radius = 2.0;  // auditing radius, m
};

/// Control vector: airspeed rate, heading rate and pitch rate commands. Roll
/// evolves open-loop (its input row in the model is zero, so the inverted
/// 3x3 channel cannot drive it).
using Control = Eigen::Vector3d;

struct UavDeriv {
    Vec3 position_rate = Vec3::Zero();
    Eigen::Vector4d attitude_rate = Eigen::Vector4d::Zero();  // [dV, dheading, dpitch, droll]
};

/// Continuous-time model. Throws std::domain_error on the pitch singularity
/// (|cos pitch| ~ 0 makes the lift row blow up) and on non-positive airspeed.
UavDeriv dynamics_deriv(const UavState& state, const Control& control, const UavParams& params);

/// Tracking law from inverting the position-rate channel: the closed loop
/// obeys err_ddot + (g1+g2+g3) err_dot + (1+g1*g2*g3) err = 0. Throws
/// std::domain_error when the channel matrix is near-singular.
Control backstep_control(const UavState& state, const Vec3& target, const ControlGains& gains,
                         const UavParams& params);

/// 1 when the closest obstacle is strictly inside the danger distance.
int obstacle_indicator(const Vec3& position, const ObstacleSet& obstacles, double danger_distance);

/// Constant heading-rate bias away from the nominal command while the danger
/// indicator is active; other channels untouched.
Control apply_avoidance(const Control& control, int indicator, double obstacle_gain);

struct TrackOptions {
    double dt = 0.01;        // integrator step, s
    double t_max = 10.0;     // tracking budget, s
    double tolerance = 0.5;  // waypoint acceptance radius, m
};

struct TrackResult {
    UavState state;
    std::vector<Vec3> trajectory;  // position after every integrator step
    bool reached = false;
    bool singular = false;
};

/// Closed-loop flight to a waypoint under the tracking law plus avoidance,
/// integrated with fixed-step RK4 and zero-order-hold control. Returns the
/// full trajectory for collision auditing; aborts early (singular=true) if
/// the model leaves its valid regime.
TrackResult track_to(const UavState& start, const Vec3& target, const ControlGains& gains,
                     const UavParams& params, const ObstacleSet& obstacles,
                     const TrackOptions& options);

/// Idealized vehicle: lands on the waypoint exactly. Lets filter and planner
/// tests run without controller dynamics.
Vec3 kinematic_move(const Vec3& position, const Vec3& target);

}  // namespace targetsearch
