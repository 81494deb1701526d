#include "targetsearch/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace targetsearch {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Noiseless measurement with the coincident case mapped to (0, 0, 0); the
// bearing and elevation conventions extend continuously to zero range.
Measurement measure_allow_coincident(const Vec3& target, const Vec3& sensor_pos) {
    const Vec3 delta = target - sensor_pos;
    const double range = delta.norm();
    Measurement z;
    z.range = range;
    if (range == 0.0) return z;
    z.bearing = (delta.x() == 0.0 && delta.y() == 0.0)
                    ? 0.0
                    : std::atan2(delta.y(), delta.x());
    z.elevation = std::asin(std::clamp(delta.z() / range, -1.0, 1.0));
    return z;
}

Measurement add_noise_3d(const Measurement& z, double sigma, RandomSource& rng) {
    Measurement noisy = z;
    noisy.range += sigma * rng.normal();
    noisy.bearing += sigma * rng.normal();
    noisy.elevation += sigma * rng.normal();
    noisy.range = std::max(0.0, noisy.range);
    noisy.bearing = wrap_angle(noisy.bearing);
    noisy.elevation = std::clamp(noisy.elevation, -M_PI / 2.0, M_PI / 2.0);
    return noisy;
}

double normal_pdf(double residual, double variance) {
    return std::exp(-0.5 * residual * residual / variance) / std::sqrt(kTwoPi * variance);
}

}  // namespace

double wrap_angle(double a) {
    a = std::fmod(a + M_PI, kTwoPi);
    if (a <= 0.0) a += kTwoPi;
    return a - M_PI;
}

double detection_prob(const Vec3& target, const Vec3& sensor_pos, const SensorConfig3D& cfg) {
    const Vec3 scaled = (target - sensor_pos).cwiseQuotient(cfg.fov_scale);
    return cfg.peak_detection * std::exp(-scaled.norm() / 2.0);
}

double detection_prob_2d(const Eigen::Vector2d& target, const Eigen::Vector2d& sensor_pos,
                         const SensorConfig2D& cfg) {
    const Eigen::Vector2d delta = (target - sensor_pos).cwiseAbs();
    const bool inside = delta.x() <= cfg.half_extent.x() && delta.y() <= cfg.half_extent.y();
    return inside ? 1.0 : 0.0;
}

Measurement measure_one(const Vec3& target, const Vec3& sensor_pos) {
    if (target == sensor_pos) {
        throw std::invalid_argument("measure_one: target coincides with the sensor");
    }
    return measure_allow_coincident(target, sensor_pos);
}

Vec3 inverse_measure(const Measurement& z, const Vec3& sensor_pos) {
    const double planar = z.range * std::cos(z.elevation);
    return sensor_pos + Vec3(planar * std::cos(z.bearing), planar * std::sin(z.bearing),
                             z.range * std::sin(z.elevation));
}

MeasurementSet sense(const TargetSet& targets, const Vec3& sensor_pos, const SensorConfig3D& cfg,
                     RandomSource& rng) {
    MeasurementSet out;
    out.reserve(targets.positions.size());
    for (const Vec3& x : targets.positions) {
        if (rng.uniform01() >= detection_prob(x, sensor_pos, cfg)) continue;
        out.push_back(add_noise_3d(measure_allow_coincident(x, sensor_pos), cfg.noise_sigma, rng));
    }
    // Randomize output order so downstream code cannot key on target identity.
    for (int i = static_cast<int>(out.size()) - 1; i > 0; --i) {
        std::swap(out[i], out[rng.uniform_int(i + 1)]);
    }
    return out;
}

SensorModel SensorModel::range3d(const SensorConfig3D& cfg) {
    SensorModel m;
    m.mode_ = SensorMode::kRange3D;
    m.cfg3d_ = cfg;
    return m;
}

SensorModel SensorModel::binary_fov2d(const SensorConfig2D& cfg, double plane_z) {
    SensorModel m;
    m.mode_ = SensorMode::kBinaryFov2D;
    m.cfg2d_ = cfg;
    m.plane_z_ = plane_z;
    return m;
}

double SensorModel::detect_prob(const Vec3& target, const Vec3& sensor_pos) const {
    if (mode_ == SensorMode::kRange3D) return detection_prob(target, sensor_pos, cfg3d_);
    return detection_prob_2d(target.head<2>(), sensor_pos.head<2>(), cfg2d_);
}

double SensorModel::measurement_density(const Measurement& z, const Vec3& x,
                                        const Vec3& sensor_pos) const {
    const Measurement h = measure_allow_coincident(x, sensor_pos);
    const double var_r = mode_ == SensorMode::kRange3D ? cfg3d_.noise_sigma * cfg3d_.noise_sigma
                                                       : cfg2d_.noise_var.x();
    const double var_b = mode_ == SensorMode::kRange3D ? var_r : cfg2d_.noise_var.y();
    double density = normal_pdf(z.range - h.range, var_r) *
                     normal_pdf(wrap_angle(z.bearing - h.bearing), var_b);
    if (mode_ == SensorMode::kRange3D) {
        density *= normal_pdf(z.elevation - h.elevation, var_r);
    }
    return density;
}

Vec3 SensorModel::inverse(const Measurement& z, const Vec3& sensor_pos) const {
    if (mode_ == SensorMode::kRange3D) return inverse_measure(z, sensor_pos);
    Vec3 p = sensor_pos + Vec3(z.range * std::cos(z.bearing), z.range * std::sin(z.bearing), 0.0);
    p.z() = plane_z_;
    return p;
}

MeasurementSet SensorModel::sense(const TargetSet& targets, const Vec3& sensor_pos,
                                  RandomSource& rng) const {
    if (mode_ == SensorMode::kRange3D) {
        return targetsearch::sense(targets, sensor_pos, cfg3d_, rng);
    }
    MeasurementSet out;
    for (const Vec3& x : targets.positions) {
        if (detection_prob_2d(x.head<2>(), sensor_pos.head<2>(), cfg2d_) < 1.0) continue;
        Measurement z = measure_allow_coincident(
            Vec3(x.x(), x.y(), sensor_pos.z()), sensor_pos);
        z.range = std::max(0.0, z.range + std::sqrt(cfg2d_.noise_var.x()) * rng.normal());
        z.bearing = wrap_angle(z.bearing + std::sqrt(cfg2d_.noise_var.y()) * rng.normal());
        z.elevation = 0.0;
        out.push_back(z);
    }
    for (int i = static_cast<int>(out.size()) - 1; i > 0; --i) {
        std::swap(out[i], out[rng.uniform_int(i + 1)]);
    }
    return out;
}

double SensorModel::cartesian_noise_scale(double range) const {
    if (mode_ == SensorMode::kRange3D) return cfg3d_.noise_sigma * (1.0 + range);
    return std::sqrt(cfg2d_.noise_var.x()) + range * std::sqrt(cfg2d_.noise_var.y());
}

}  // namespace targetsearch
