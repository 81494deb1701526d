#pragma once

#include <vector>

#include "targetsearch/sensor.hpp"

namespace targetsearch {

/// Weighted particle representation of the target intensity function. The
/// weights sum to the expected number of targets, not to one.
struct ParticleSet {
    std::vector<Vec3> positions;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const { return positions.size(); }
    [[nodiscard]] bool empty() const { return positions.empty(); }
    void push_back(const Vec3& p, double w) {
        positions.push_back(p);
        weights.push_back(w);
    }
};

struct FilterConfig {
    double survival_prob = 1.0;      // targets are static; kept for experiments
    int birth_count = 130;           // particles injected per step with measurements
    double birth_mass = 0.2;         // new intensity mass per measurement
    int particles_per_target = 400;  // resampling allocation per expected target
    int max_particles = 5000;
};

/// Expected target count: the total particle mass.
double expected_count(const ParticleSet& particles);

/// Prediction with a Dirac (static-target) transition: surviving particles
/// keep their positions with weights scaled by the survival probability.
/// When measurements are present, birth particles are drawn from a Gaussian
/// fitted to the measurement set mapped back to Cartesian space.
ParticleSet predict(const ParticleSet& particles, const MeasurementSet& measurements,
                    const Vec3& sensor_pos, const SensorModel& sensor, const FilterConfig& cfg,
                    RandomSource& rng);

/// Measurement update: positions unchanged, each weight scaled by
/// 1 - p_detect + sum over measurements of the normalized joint likelihood.
ParticleSet update(const ParticleSet& particles, const MeasurementSet& measurements,
                   const Vec3& sensor_pos, const SensorModel& sensor);

/// Importance resampling with mass-preserving uniform weights and an adaptive
/// particle count proportional to the expected target count.
ParticleSet resample(const ParticleSet& particles, const FilterConfig& cfg, RandomSource& rng);

}  // namespace targetsearch
