#pragma once

#include <span>
#include <vector>

#include "targetsearch/phd_filter.hpp"

namespace targetsearch {

struct Cluster {
    Vec3 center = Vec3::Zero();
    double radius = 0.0;  // max distance from center to any member
    double mass = 0.0;    // sum of member weights
    std::vector<std::size_t> members;
};

struct Thresholds {
    double max_radius = 1.1;       // a found cluster must be at least this tight (m)
    double min_mass = 2.2;         // and carry at least this much intensity mass
    double gating_distance = 5.0;  // measurement suppression radius around found targets (m)
};

struct FoundTarget {
    Vec3 position = Vec3::Zero();
    int step = 0;  // discovery step
};

/// Number of clusters to request: one per expected target, at least one for a
/// non-empty particle set.
int choose_cluster_count(const ParticleSet& particles);

/// Weighted Lloyd iteration with farthest-point seeding. Deterministic given
/// the random stream; empty clusters are dropped.
std::vector<Cluster> kmeans_clusters(const ParticleSet& particles, int cluster_count,
                                     RandomSource& rng, int max_iterations = 50);

struct ExtractionResult {
    std::vector<Vec3> new_targets;               // found this step, duplicates suppressed
    std::vector<std::size_t> extracted_clusters; // indices of clusters whose particles were removed
    ParticleSet pruned;
};

/// Promote clusters that are simultaneously tight and massive to found
/// targets and delete their member particles. Centers closer than the radius
/// threshold to an already-found target are treated as re-formed peaks: the
/// particles are still deleted, but no new target is recorded.
ExtractionResult extract_found(const std::vector<Cluster>& clusters, const Thresholds& thresholds,
                               const ParticleSet& particles,
                               std::span<const FoundTarget> already_found);

/// For each found target in discovery order, remove the single closest
/// measurement within the gating distance (a target produces at most one
/// measurement, so removing more would erase evidence of nearby targets).
MeasurementSet gate_measurements(const MeasurementSet& measurements,
                                 std::span<const FoundTarget> found, const Thresholds& thresholds,
                                 const Vec3& sensor_pos, const SensorModel& sensor);

}  // namespace targetsearch
