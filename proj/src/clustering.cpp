#include "targetsearch/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace targetsearch {

int choose_cluster_count(const ParticleSet& particles) {
    if (particles.empty()) return 0;
    const double expected = expected_count(particles);
    return std::max(1, static_cast<int>(std::floor(expected + 0.5)));
}

namespace {

// Farthest-point seeding: the first seed is a weighted draw, each subsequent
// seed maximizes the distance to the seeds chosen so far (ties by index).
std::vector<Vec3> seed_centers(const ParticleSet& particles, int k, RandomSource& rng) {
    const std::size_t n = particles.size();
    std::vector<Vec3> centers;
    centers.reserve(k);

    double total = expected_count(particles);
    std::size_t first = 0;
    if (total > 0.0) {
        const double u = rng.uniform01() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += particles.weights[i];
            if (u < acc) {
                first = i;
                break;
            }
        }
    } else {
        first = static_cast<std::size_t>(rng.uniform_int(static_cast<int>(n)));
    }
    centers.push_back(particles.positions[first]);

    std::vector<double> min_dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        min_dist[i] = (particles.positions[i] - centers[0]).norm();
    }
    while (static_cast<int>(centers.size()) < k) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (min_dist[i] > min_dist[best]) best = i;
        }
        centers.push_back(particles.positions[best]);
        for (std::size_t i = 0; i < n; ++i) {
            min_dist[i] = std::min(min_dist[i], (particles.positions[i] - centers.back()).norm());
        }
    }
    return centers;
}

}  // namespace

std::vector<Cluster> kmeans_clusters(const ParticleSet& particles, int cluster_count,
                                     RandomSource& rng, int max_iterations) {
    if (particles.empty() || cluster_count < 1) return {};
    const std::size_t n = particles.size();
    const int k = std::min<int>(cluster_count, static_cast<int>(n));

    std::vector<Vec3> centers = seed_centers(particles, k, rng);
    std::vector<int> assignment(n, -1);

    for (int iter = 0; iter < max_iterations; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_dist = (particles.positions[i] - centers[0]).squaredNorm();
            for (int c = 1; c < k; ++c) {
                const double d = (particles.positions[i] - centers[c]).squaredNorm();
                if (d < best_dist) {
                    best_dist = d;
                    best = c;
                }
            }
            if (assignment[i] != best) {
                assignment[i] = best;
                changed = true;
            }
        }
        if (!changed) break;

        for (int c = 0; c < k; ++c) {
            Vec3 weighted_sum = Vec3::Zero();
            Vec3 unweighted_sum = Vec3::Zero();
            double mass = 0.0;
            int members = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (assignment[i] != c) continue;
                weighted_sum += particles.weights[i] * particles.positions[i];
                unweighted_sum += particles.positions[i];
                mass += particles.weights[i];
                ++members;
            }
            if (members == 0) continue;  // empty cluster keeps its center, dropped below
            centers[c] = mass > 0.0 ? Vec3(weighted_sum / mass)
                                    : Vec3(unweighted_sum / members);
        }
    }

    std::vector<Cluster> clusters;
    clusters.reserve(k);
    for (int c = 0; c < k; ++c) {
        Cluster cluster;
        for (std::size_t i = 0; i < n; ++i) {
            if (assignment[i] != c) continue;
            cluster.members.push_back(i);
            cluster.mass += particles.weights[i];
        }
        if (cluster.members.empty()) continue;
        Vec3 weighted_sum = Vec3::Zero();
        Vec3 unweighted_sum = Vec3::Zero();
        for (std::size_t i : cluster.members) {
            weighted_sum += particles.weights[i] * particles.positions[i];
            unweighted_sum += particles.positions[i];
        }
        cluster.center = cluster.mass > 0.0
                             ? Vec3(weighted_sum / cluster.mass)
                             : Vec3(unweighted_sum / static_cast<double>(cluster.members.size()));
        for (std::size_t i : cluster.members) {
            cluster.radius =
                std::max(cluster.radius, (particles.positions[i] - cluster.center).norm());
        }
        clusters.push_back(std::move(cluster));
    }
    return clusters;
}

ExtractionResult extract_found(const std::vector<Cluster>& clusters, const Thresholds& thresholds,
                               const ParticleSet& particles,
                               std::span<const FoundTarget> already_found) {
    ExtractionResult result;
    std::vector<bool> remove(particles.size(), false);
    std::vector<Vec3> accepted;

    for (std::size_t c = 0; c < clusters.size(); ++c) {
        const Cluster& cluster = clusters[c];
        if (cluster.radius > thresholds.max_radius || cluster.mass < thresholds.min_mass) continue;
        result.extracted_clusters.push_back(c);
        for (std::size_t i : cluster.members) remove[i] = true;

        bool duplicate = false;
        for (const FoundTarget& f : already_found) {
            if ((cluster.center - f.position).norm() < thresholds.max_radius) {
                duplicate = true;
                break;
            }
        }
        for (const Vec3& p : accepted) {
            if ((cluster.center - p).norm() < thresholds.max_radius) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) accepted.push_back(cluster.center);
    }

    for (std::size_t i = 0; i < particles.size(); ++i) {
        if (!remove[i]) result.pruned.push_back(particles.positions[i], particles.weights[i]);
    }
    result.new_targets = std::move(accepted);
    return result;
}

MeasurementSet gate_measurements(const MeasurementSet& measurements,
                                 std::span<const FoundTarget> found, const Thresholds& thresholds,
                                 const Vec3& sensor_pos, const SensorModel& sensor) {
    std::vector<bool> removed(measurements.size(), false);
    std::vector<Vec3> cartesian;
    cartesian.reserve(measurements.size());
    for (const Measurement& z : measurements) cartesian.push_back(sensor.inverse(z, sensor_pos));

    for (const FoundTarget& f : found) {
        int closest = -1;
        double closest_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < measurements.size(); ++i) {
            if (removed[i]) continue;
            const double d = (cartesian[i] - f.position).norm();
            if (d <= thresholds.gating_distance && d < closest_dist) {
                closest_dist = d;
                closest = static_cast<int>(i);
            }
        }
        if (closest >= 0) removed[closest] = true;
    }

    MeasurementSet out;
    for (std::size_t i = 0; i < measurements.size(); ++i) {
        if (!removed[i]) out.push_back(measurements[i]);
    }
    return out;
}

}  // namespace targetsearch
