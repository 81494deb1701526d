#pragma once

#include <optional>
#include <vector>

#include "targetsearch/objectives.hpp"
#include "targetsearch/vehicle.hpp"

namespace targetsearch {

struct MoveSet {
    std::vector<Vec3> deltas;  // every delta has norm == step_length
    double step_length = 12.0;

    /// Six axis-aligned moves (+x, -x, +y, -y, +z, -z).
    static MoveSet axes3d(double step_length);
    /// Eight compass moves in the plane, diagonals included.
    static MoveSet compass2d(double step_length);
};

struct PlannerConfig {
    int horizon = 1;  // receding horizon: plan a sequence, execute its first step
    ObjectiveConfig objective;
    MoveSet moves = MoveSet::axes3d(12.0);
};

/// All candidate position sequences of length horizon reachable by chaining
/// moves, keeping only those that stay inside the environment. If every
/// sequence leaves the environment, clamped best-effort sequences are
/// returned instead so the vehicle never deadlocks at the boundary.
std::vector<std::vector<Vec3>> enumerate_sequences(const Vec3& position, const PlannerConfig& cfg,
                                                   const Environment& env);

struct PlanResult {
    std::vector<Vec3> sequence;
    double exploration = 0.0;  // exploration component of the winner
    double refinement = 0.0;   // refinement component of the winner
};

/// Receding-horizon argmax of weighted exploration plus refinement over the
/// candidate sequences; ties break toward the earliest candidate.
PlanResult plan(const std::vector<std::vector<Vec3>>& candidates, const ExplorationField& field,
                const std::vector<Cluster>& clusters, const ParticleSet& particles,
                const PlannerConfig& cfg, const SensorModel& sensor);

enum class VehicleMode { kKinematic, kDynamic };

/// Everything a search step needs besides the evolving state.
struct SearchSetup {
    Environment env;
    SensorModel sensor = SensorModel::range3d(SensorConfig3D{});
    FilterConfig filter;
    Thresholds thresholds;
    PlannerConfig planner;
    VehicleMode vehicle_mode = VehicleMode::kDynamic;
    UavParams uav_params;
    ControlGains gains;
    TrackOptions track;
    ObstacleSet obstacles;
};

struct StepRecord {
    int step = 0;
    Vec3 commanded = Vec3::Zero();  // waypoint issued this step
    double expected_targets = 0.0;  // particle mass after the filter pass
    int found_total = 0;
    int measurement_count = 0;  // measurements produced by the sensor
    int gated_count = 0;        // measurements suppressed near found targets
    double exploration_score = 0.0;
    double refinement_score = 0.0;
    double plan_seconds = 0.0;
    bool tracking_timeout = false;
    Vec3 achieved = Vec3::Zero();          // vehicle position after tracking
    double min_obstacle_distance = -1.0;   // over this step's trajectory; <0 if no obstacles
};

struct SearchState {
    ParticleSet particles;
    ExplorationField field;
    std::vector<FoundTarget> found;
    UavState uav;
    Vec3 position = Vec3::Zero();  // planner position: the commanded waypoint chain
    int step = 0;
    std::vector<StepRecord> records;
};

SearchState make_search_state(const SearchSetup& setup, const Vec3& start,
                              const UavState& initial_uav, double grid_spacing);

/// One full search step: cluster, extract found targets, sense, gate, run the
/// filter, decay the exploration bonus, plan, and move the vehicle. When
/// forced_waypoint is set (coverage baselines) the planning stage is replaced
/// by that waypoint. The commanded waypoint drives the planner chain; the
/// dynamic vehicle tracks it between steps and a tracking timeout is recorded
/// without interrupting the search.
StepRecord search_step(SearchState& state, const TargetSet& truth, const SearchSetup& setup,
                       RandomSource& sensor_rng, RandomSource& filter_rng,
                       RandomSource& cluster_rng,
                       const std::optional<Vec3>& forced_waypoint = std::nullopt);

}  // namespace targetsearch
