#include "targetsearch/phd_filter.hpp"

#include <algorithm>
#include <cmath>

namespace targetsearch {

namespace {

// Measurements whose joint likelihood mass over all particles falls below this
// floor are unsupported by the current particle set and are skipped to avoid
// 0/0 weight blowups.
constexpr double kLikelihoodFloor = 1e-300;

}  // namespace

double expected_count(const ParticleSet& particles) {
    double total = 0.0;
    for (double w : particles.weights) total += w;
    return total;
}

ParticleSet predict(const ParticleSet& particles, const MeasurementSet& measurements,
                    const Vec3& sensor_pos, const SensorModel& sensor, const FilterConfig& cfg,
                    RandomSource& rng) {
    ParticleSet out;
    out.positions = particles.positions;
    out.weights.reserve(particles.size() + cfg.birth_count);
    for (double w : particles.weights) out.weights.push_back(cfg.survival_prob * w);

    if (measurements.empty() || cfg.birth_count <= 0) return out;

    // Birth proposal: a mixture with one Gaussian component per measurement.
    // A single Gaussian over the whole measurement set (its empirical mean
    // and covariance) degenerates when one scan holds returns from several
    // far-apart targets: the births then smear across the space between
    // them and that mass never dies. The per-measurement mixture keeps the
    // construction's intent, births concentrated where evidence arrived.
    // Each component's spread reflects the range-scaled Cartesian noise of
    // its measurement.
    const bool planar = sensor.mode() == SensorMode::kBinaryFov2D;
    const double weight_each =
        cfg.birth_mass * static_cast<double>(measurements.size()) / cfg.birth_count;
    const std::size_t m = measurements.size();
    for (int i = 0; i < cfg.birth_count; ++i) {
        const Measurement& z = measurements[i % m];
        const Vec3 center = sensor.inverse(z, sensor_pos);
        const double spread = 2.0 * sensor.cartesian_noise_scale(z.range);
        const Vec3 noise(rng.normal(), rng.normal(), planar ? 0.0 : rng.normal());
        out.push_back(center + spread * noise, weight_each);
    }
    return out;
}

ParticleSet update(const ParticleSet& particles, const MeasurementSet& measurements,
                   const Vec3& sensor_pos, const SensorModel& sensor) {
    const std::size_t n = particles.size();
    std::vector<double> detect(n);
    for (std::size_t i = 0; i < n; ++i) {
        detect[i] = sensor.detect_prob(particles.positions[i], sensor_pos);
    }

    std::vector<double> gain(n, 0.0);
    std::vector<double> joint(n);
    for (const Measurement& z : measurements) {
        double normalizer = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            joint[i] = detect[i] * sensor.measurement_density(z, particles.positions[i], sensor_pos);
            normalizer += joint[i] * particles.weights[i];
        }
        if (normalizer < kLikelihoodFloor) continue;
        for (std::size_t i = 0; i < n; ++i) gain[i] += joint[i] / normalizer;
    }

    ParticleSet out;
    out.positions = particles.positions;
    out.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.weights[i] = (1.0 - detect[i] + gain[i]) * particles.weights[i];
    }
    return out;
}

ParticleSet resample(const ParticleSet& particles, const FilterConfig& cfg, RandomSource& rng) {
    // Numerical hygiene: drop particles whose weight is negligible relative to
    // the total mass before drawing offspring.
    const double total = expected_count(particles);
    if (!(total > 0.0)) return ParticleSet{};

    ParticleSet kept;
    kept.positions.reserve(particles.size());
    kept.weights.reserve(particles.size());
    const double floor = 1e-12 * total;
    for (std::size_t i = 0; i < particles.size(); ++i) {
        if (particles.weights[i] >= floor) {
            kept.push_back(particles.positions[i], particles.weights[i]);
        }
    }
    if (kept.empty() || !(expected_count(kept) > 0.0)) return ParticleSet{};

    // Pruned mass is redistributed so the total is preserved exactly.
    const double scaled = static_cast<double>(cfg.particles_per_target) * total;
    int count = static_cast<int>(std::floor(scaled + 0.5));  // round half up
    count = std::max(count, cfg.particles_per_target);
    count = std::min(count, cfg.max_particles);

    std::vector<double> cumulative(kept.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        acc += kept.weights[i];
        cumulative[i] = acc;
    }

    ParticleSet out;
    out.positions.reserve(count);
    out.weights.assign(count, total / count);
    for (int i = 0; i < count; ++i) {
        const double u = rng.uniform01() * acc;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const std::size_t idx =
            std::min(static_cast<std::size_t>(it - cumulative.begin()), kept.size() - 1);
        out.positions.push_back(kept.positions[idx]);
    }
    return out;
}

}  // namespace targetsearch
