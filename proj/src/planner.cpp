#include "targetsearch/planner.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace targetsearch {

MoveSet MoveSet::axes3d(double step_length) {
    MoveSet moves;
    moves.step_length = step_length;
    moves.deltas = {Vec3(step_length, 0, 0),  Vec3(-step_length, 0, 0),
                    Vec3(0, step_length, 0),  Vec3(0, -step_length, 0),
                    Vec3(0, 0, step_length),  Vec3(0, 0, -step_length)};
    return moves;
}

MoveSet MoveSet::compass2d(double step_length) {
    MoveSet moves;
    moves.step_length = step_length;
    const double diag = step_length / std::sqrt(2.0);
    moves.deltas = {Vec3(step_length, 0, 0), Vec3(-step_length, 0, 0),
                    Vec3(0, step_length, 0), Vec3(0, -step_length, 0),
                    Vec3(diag, diag, 0),     Vec3(diag, -diag, 0),
                    Vec3(-diag, diag, 0),    Vec3(-diag, -diag, 0)};
    return moves;
}

namespace {

void extend_sequences(const Vec3& position, const MoveSet& moves, const Environment& env,
                      int remaining, std::vector<Vec3>& prefix,
                      std::vector<std::vector<Vec3>>& out) {
    if (remaining == 0) {
        out.push_back(prefix);
        return;
    }
    for (const Vec3& delta : moves.deltas) {
        const Vec3 next = position + delta;
        if (!env.contains(next)) continue;
        prefix.push_back(next);
        extend_sequences(next, moves, env, remaining - 1, prefix, out);
        prefix.pop_back();
    }
}

void extend_clamped(const Vec3& position, const MoveSet& moves, const Environment& env,
                    int remaining, std::vector<Vec3>& prefix,
                    std::vector<std::vector<Vec3>>& out) {
    if (remaining == 0) {
        out.push_back(prefix);
        return;
    }
    for (const Vec3& delta : moves.deltas) {
        const Vec3 next = env.clamp(position + delta);
        prefix.push_back(next);
        extend_clamped(next, moves, env, remaining - 1, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<std::vector<Vec3>> enumerate_sequences(const Vec3& position, const PlannerConfig& cfg,
                                                   const Environment& env) {
    if (cfg.horizon < 1) throw std::invalid_argument("planner horizon must be >= 1");
    std::vector<std::vector<Vec3>> out;
    std::vector<Vec3> prefix;
    prefix.reserve(cfg.horizon);
    extend_sequences(position, cfg.moves, env, cfg.horizon, prefix, out);
    if (out.empty()) {
        // Every candidate leaves the environment; fall back to boundary-clamped
        // sequences so the planner can still pick a best effort.
        extend_clamped(position, cfg.moves, env, cfg.horizon, prefix, out);
    }
    return out;
}

PlanResult plan(const std::vector<std::vector<Vec3>>& candidates, const ExplorationField& field,
                const std::vector<Cluster>& clusters, const ParticleSet& particles,
                const PlannerConfig& cfg, const SensorModel& sensor) {
    if (candidates.empty()) throw std::invalid_argument("plan: no candidate sequences");
    PlanResult best;
    double best_total = -std::numeric_limits<double>::infinity();
    for (const auto& seq : candidates) {
        const double expl = exploration_score(field, seq);
        const double refine = cfg.objective.mode == RefinementMode::kCenterProb
                                  ? center_prob_score(clusters, seq, sensor)
                                  : mi_surrogate_score(particles, seq, sensor);
        const double total = cfg.objective.exploration_weight * expl + refine;
        if (total > best_total) {
            best_total = total;
            best.sequence = seq;
            best.exploration = expl;
            best.refinement = refine;
        }
    }
    return best;
}

SearchState make_search_state(const SearchSetup& setup, const Vec3& start,
                              const UavState& initial_uav, double grid_spacing) {
    SearchState state{
        ParticleSet{}, ExplorationField::initial(setup.env, grid_spacing), {}, initial_uav,
        start,         0,
        {}};
    state.uav.position = start;
    return state;
}

StepRecord search_step(SearchState& state, const TargetSet& truth, const SearchSetup& setup,
                       RandomSource& sensor_rng, RandomSource& filter_rng,
                       RandomSource& cluster_rng, const std::optional<Vec3>& forced_waypoint) {
    StepRecord record;
    record.step = state.step;
    const Vec3 q = state.position;

    // Cluster the current intensity and promote tight, massive clusters to
    // found targets before any new evidence is processed.
    std::vector<Cluster> clusters;
    if (!state.particles.empty()) {
        clusters = kmeans_clusters(state.particles, choose_cluster_count(state.particles),
                                   cluster_rng);
    }
    const ExtractionResult extraction =
        extract_found(clusters, setup.thresholds, state.particles, state.found);
    for (const Vec3& p : extraction.new_targets) {
        state.found.push_back(FoundTarget{p, state.step});
    }
    state.particles = extraction.pruned;

    // Clusters that were just extracted must not keep attracting refinement.
    std::vector<Cluster> active_clusters;
    {
        std::size_t next_removed = 0;
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            if (next_removed < extraction.extracted_clusters.size() &&
                extraction.extracted_clusters[next_removed] == c) {
                ++next_removed;
                continue;
            }
            active_clusters.push_back(clusters[c]);
        }
    }

    // Sense, then drop measurements attributable to already-found targets.
    const MeasurementSet raw = setup.sensor.sense(truth, q, sensor_rng);
    const MeasurementSet gated =
        gate_measurements(raw, state.found, setup.thresholds, q, setup.sensor);
    record.measurement_count = static_cast<int>(raw.size());
    record.gated_count = static_cast<int>(raw.size() - gated.size());

    // Filter pass: predict with measurement-driven birth, update, resample.
    state.particles = predict(state.particles, gated, q, setup.sensor, setup.filter, filter_rng);
    state.particles = update(state.particles, gated, q, setup.sensor);
    state.particles = resample(state.particles, setup.filter, filter_rng);
    record.expected_targets = expected_count(state.particles);

    // The bonus decays at the executed position only.
    bonus_update(state.field, q, setup.sensor);

    Vec3 commanded;
    if (forced_waypoint) {
        commanded = *forced_waypoint;
    } else {
        const auto t0 = std::chrono::steady_clock::now();
        const auto candidates = enumerate_sequences(q, setup.planner, setup.env);
        const PlanResult choice = plan(candidates, state.field, active_clusters, state.particles,
                                       setup.planner, setup.sensor);
        const auto t1 = std::chrono::steady_clock::now();
        record.plan_seconds = std::chrono::duration<double>(t1 - t0).count();
        record.exploration_score = choice.exploration;
        record.refinement_score = choice.refinement;
        commanded = choice.sequence.front();
    }

    if (setup.vehicle_mode == VehicleMode::kKinematic) {
        state.uav.position = kinematic_move(state.uav.position, commanded);
        record.achieved = state.uav.position;
    } else {
        const TrackResult tracked =
            track_to(state.uav, commanded, setup.gains, setup.uav_params, setup.obstacles,
                     setup.track);
        if (tracked.singular) {
            throw std::domain_error("search_step: vehicle model left its valid flight regime");
        }
        state.uav = tracked.state;
        record.tracking_timeout = !tracked.reached;
        record.achieved = tracked.state.position;
        if (!setup.obstacles.centers.empty()) {
            double min_dist = std::numeric_limits<double>::infinity();
            for (const Vec3& p : tracked.trajectory) {
                for (const Vec3& o : setup.obstacles.centers) {
                    min_dist = std::min(min_dist, (p - o).norm());
                }
            }
            record.min_obstacle_distance = tracked.trajectory.empty() ? -1.0 : min_dist;
        }
    }

    // The planner chain advances by the commanded waypoint: the controller is
    // given the inter-step interval to reach it.
    state.position = commanded;
    record.commanded = commanded;
    record.found_total = static_cast<int>(state.found.size());

    state.records.push_back(record);
    ++state.step;
    return record;
}

}  // namespace targetsearch
