#include "targetsearch/objectives.hpp"

namespace targetsearch {

void bonus_update(ExplorationField& field, const Vec3& sensor_pos, const SensorModel& sensor) {
    const auto& dims = field.grid.dims();
    for (int l = 0; l < dims[2]; ++l) {
        for (int j = 0; j < dims[1]; ++j) {
            for (int i = 0; i < dims[0]; ++i) {
                const Vec3 node = field.grid.node_position(i, j, l);
                field.grid.at(i, j, l) *= 1.0 - sensor.detect_prob(node, sensor_pos);
            }
        }
    }
}

double exploration_score(const ExplorationField& field, std::span<const Vec3> sequence) {
    double score = 0.0;
    for (const Vec3& q : sequence) score += field.grid.sample(q);
    return score;
}

double center_prob_score(std::span<const Cluster> clusters, std::span<const Vec3> sequence,
                         const SensorModel& sensor) {
    double score = 0.0;
    for (const Vec3& q : sequence) {
        for (const Cluster& c : clusters) score += sensor.detect_prob(c.center, q);
    }
    return score;
}

double mi_surrogate_score(const ParticleSet& particles, std::span<const Vec3> sequence,
                          const SensorModel& sensor) {
    double score = 0.0;
    for (const Vec3& q : sequence) {
        for (std::size_t i = 0; i < particles.size(); ++i) {
            score += particles.weights[i] * sensor.detect_prob(particles.positions[i], q);
        }
    }
    return score;
}

}  // namespace targetsearch
