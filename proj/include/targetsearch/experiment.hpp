#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "targetsearch/lawnmower.hpp"
#include "targetsearch/metrics.hpp"
#include "targetsearch/planner.hpp"

namespace targetsearch {

enum class Algorithm { kProposed, kLawnmower, kRefinementOnly };

struct TargetGenerator {
    enum class Kind { kUniform, kClustered, kManual, kNone };
    Kind kind = Kind::kUniform;
    int count = 6;              // uniform
    double margin = 20.0;       // keep-out band from the environment faces, m
    int clusters = 2;           // clustered
    int per_cluster = 3;
    double spread = 8.0;        // within-cluster standard deviation, m
    std::vector<Vec3> manual;
};

struct LawnmowerConfig {
    double spacing_xy = 48.0;
    double layer_dz = 48.0;
};

struct ExperimentSpec {
    std::string name = "run";
    Environment env;
    TargetGenerator targets;
    Algorithm algorithm = Algorithm::kProposed;
    SearchSetup setup;  // sensor, filter, thresholds, planner, vehicle, obstacles
    double grid_spacing = 10.0;
    Vec3 start = Vec3::Zero();
    UavState initial_uav;
    std::vector<std::uint64_t> seeds;
    int max_steps = 300;
    bool stop_when_all_found = false;
    LawnmowerConfig lawnmower;
};

struct RunRecord {
    std::uint64_t seed = 0;
    std::vector<StepRecord> steps;
    std::vector<FoundTarget> found;
    std::vector<Vec3> truth;
    std::optional<int> steps_to_all_found;
    std::optional<double> rmse;
    std::vector<int> matched_truth;   // per found entry, -1 when unmatched
    std::vector<double> match_dist;
    double mean_plan_seconds = 0.0;
    double min_obstacle_distance = -1.0;  // over the whole run; <0 when unaudited
    double bonus_below_half_fraction = 0.0;  // exploration nodes below 0.5 at the end
    bool bonus_monotone = true;              // node values never increased
};

TargetSet generate_targets(const TargetGenerator& gen, const Environment& env, RandomSource& rng);

/// One deterministic run per seed (replicates execute on worker threads).
/// The coverage and refinement-only baselines reuse the same filter and
/// found-target machinery and differ only in waypoint selection.
std::vector<RunRecord> run_experiment(const ExperimentSpec& spec);

struct AggregateMetrics {
    std::vector<double> mean_detections;      // per step, padded to the longest run
    std::vector<double> detections_half_width;
    MeanCI steps_to_all_found;  // unfinished runs count their executed steps
    std::optional<MeanCI> rmse; // over seeds that found anything
    MeanCI plan_seconds;
};

/// Mean curves and Student-t 95% confidence half-widths across seeds.
AggregateMetrics aggregate(const std::vector<RunRecord>& records);

}  // namespace targetsearch
