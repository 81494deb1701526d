#pragma once

#include <Eigen/Dense>
#include <vector>

#include "targetsearch/geometry.hpp"
#include "targetsearch/random.hpp"

namespace targetsearch {

/// Smooth omnidirectional detection profile: the detection probability decays
/// with the axis-normalized distance between target and sensor.
struct SensorConfig3D {
    double peak_detection = 0.98;       // supremum of the detection probability
    Vec3 fov_scale{25.0, 25.0, 25.0};   // per-axis normalization, meters
    double noise_sigma = 0.5;           // std dev on range (m) and angles (rad)

    [[nodiscard]] Eigen::Matrix3d covariance() const {
        return noise_sigma * noise_sigma * Eigen::Matrix3d::Identity();
    }
};

/// Hard rectangular footprint used in the planar simulation mode: detection is
/// certain inside the box centered on the sensor, impossible outside.
struct SensorConfig2D {
    Eigen::Vector2d half_extent{0.2, 0.2};
    Eigen::Vector2d noise_var{0.145, 0.112};  // diagonal measurement covariance
};

/// Range/bearing(/elevation) detection. Elevation is zero in planar mode.
struct Measurement {
    double range = 0.0;      // >= 0, meters
    double bearing = 0.0;    // (-pi, pi]
    double elevation = 0.0;  // [-pi/2, pi/2]
};

using MeasurementSet = std::vector<Measurement>;

struct TargetSet {
    std::vector<Vec3> positions;
    [[nodiscard]] int count() const { return static_cast<int>(positions.size()); }
};

double detection_prob(const Vec3& target, const Vec3& sensor_pos, const SensorConfig3D& cfg);
double detection_prob_2d(const Eigen::Vector2d& target, const Eigen::Vector2d& sensor_pos,
                         const SensorConfig2D& cfg);

/// Noiseless range/bearing/elevation of a target. Rejects the degenerate
/// coincident case (zero range leaves the elevation undefined).
Measurement measure_one(const Vec3& target, const Vec3& sensor_pos);

/// Cartesian point reproducing the given measurement from sensor_pos.
Vec3 inverse_measure(const Measurement& z, const Vec3& sensor_pos);

MeasurementSet sense(const TargetSet& targets, const Vec3& sensor_pos, const SensorConfig3D& cfg,
                     RandomSource& rng);

/// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

enum class SensorMode { kRange3D, kBinaryFov2D };

/// Mode-dispatching facade used by the filter, objectives and harness so the
/// planar binary-footprint variant runs through the same pipeline.
class SensorModel {
public:
    static SensorModel range3d(const SensorConfig3D& cfg);
    static SensorModel binary_fov2d(const SensorConfig2D& cfg, double plane_z = 0.0);

    [[nodiscard]] double detect_prob(const Vec3& target, const Vec3& sensor_pos) const;
    /// Measurement density g(z | x) for a hypothetical target at x.
    [[nodiscard]] double measurement_density(const Measurement& z, const Vec3& x,
                                             const Vec3& sensor_pos) const;
    [[nodiscard]] Vec3 inverse(const Measurement& z, const Vec3& sensor_pos) const;
    [[nodiscard]] MeasurementSet sense(const TargetSet& targets, const Vec3& sensor_pos,
                                       RandomSource& rng) const;

    [[nodiscard]] SensorMode mode() const { return mode_; }
    [[nodiscard]] const SensorConfig3D& config3d() const { return cfg3d_; }
    [[nodiscard]] const SensorConfig2D& config2d() const { return cfg2d_; }
    /// Cartesian scale of the measurement noise at the given range: angle
    /// noise sweeps an arc proportional to the distance.
    [[nodiscard]] double cartesian_noise_scale(double range) const;

private:
    SensorMode mode_ = SensorMode::kRange3D;
    SensorConfig3D cfg3d_{};
    SensorConfig2D cfg2d_{};
    double plane_z_ = 0.0;
};

}  // namespace targetsearch
