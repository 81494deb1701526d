#pragma once

#include <span>

#include "targetsearch/clustering.hpp"

namespace targetsearch {

/// Grid-sampled exploration bonus in [0, 1]. Starts at one everywhere and
/// decays wherever the sensor has looked, so high values mark unseen space.
struct ExplorationField {
    ScalarGrid grid;

    explicit ExplorationField(ScalarGrid g) : grid(std::move(g)) {}
    static ExplorationField initial(const Environment& env, double spacing) {
        return ExplorationField(ScalarGrid::cover(env, spacing, 1.0));
    }
};

enum class RefinementMode { kCenterProb, kMiSurrogate };

struct ObjectiveConfig {
    double exploration_weight = 2.2 / 0.98;  // balance against refinement, see plan()
    RefinementMode mode = RefinementMode::kCenterProb;
};

/// Decay every node by the probability it was observed from sensor_pos.
void bonus_update(ExplorationField& field, const Vec3& sensor_pos, const SensorModel& sensor);

/// Interpolated bonus summed along a candidate position sequence.
double exploration_score(const ExplorationField& field, std::span<const Vec3> sequence);

/// Refinement by center probabilities: total detection probability of all
/// cluster centers accumulated along the sequence.
double center_prob_score(std::span<const Cluster> clusters, std::span<const Vec3> sequence,
                         const SensorModel& sensor);

/// Refinement surrogate for mutual-information planners: the expected number
/// of detections along the sequence. Maximizing it drives the probability of
/// an empty measurement set down, which is the event MI-based planners
/// penalize.
double mi_surrogate_score(const ParticleSet& particles, std::span<const Vec3> sequence,
                          const SensorModel& sensor);

}  // namespace targetsearch
