#include "targetsearch/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

namespace targetsearch {

namespace {

// Fixed stream ids so every module draws from an independent deterministic
// stream of the run's seed. Target layout uses its own stream, which keeps
// maps identical across algorithms for a given seed.
constexpr std::uint64_t kTargetStream = 1;
constexpr std::uint64_t kSensorStream = 2;
constexpr std::uint64_t kFilterStream = 3;
constexpr std::uint64_t kClusterStream = 4;

Vec3 uniform_in_box(const Environment& env, double margin, RandomSource& rng) {
    Vec3 p;
    const int active = env.dimensionality == 2 ? 2 : 3;
    for (int a = 0; a < 3; ++a) {
        if (a >= active) {
            p[a] = env.lower[a];
            continue;
        }
        const double lo = env.lower[a] + margin;
        const double hi = env.upper[a] - margin;
        if (!(lo <= hi)) throw std::invalid_argument("target margin exceeds the environment");
        p[a] = rng.uniform(lo, hi);
    }
    return p;
}

}  // namespace

TargetSet generate_targets(const TargetGenerator& gen, const Environment& env,
                           RandomSource& rng) {
    TargetSet targets;
    switch (gen.kind) {
        case TargetGenerator::Kind::kNone:
            break;
        case TargetGenerator::Kind::kManual:
            for (const Vec3& p : gen.manual) {
                if (!env.contains(p)) {
                    throw std::invalid_argument("manual target outside the environment");
                }
                targets.positions.push_back(p);
            }
            break;
        case TargetGenerator::Kind::kUniform:
            for (int i = 0; i < gen.count; ++i) {
                targets.positions.push_back(uniform_in_box(env, gen.margin, rng));
            }
            break;
        case TargetGenerator::Kind::kClustered:
            for (int c = 0; c < gen.clusters; ++c) {
                const Vec3 center = uniform_in_box(env, gen.margin, rng);
                for (int i = 0; i < gen.per_cluster; ++i) {
                    Vec3 p = center;
                    const int active = env.dimensionality == 2 ? 2 : 3;
                    for (int a = 0; a < active; ++a) p[a] += gen.spread * rng.normal();
                    targets.positions.push_back(env.clamp(p));
                }
            }
            break;
    }
    return targets;
}

namespace {

RunRecord run_single(const ExperimentSpec& spec, std::uint64_t seed) {
    RandomSource master(seed);
    RandomSource target_rng = master.stream(kTargetStream);
    RandomSource sensor_rng = master.stream(kSensorStream);
    RandomSource filter_rng = master.stream(kFilterStream);
    RandomSource cluster_rng = master.stream(kClusterStream);

    const TargetSet truth = generate_targets(spec.targets, spec.env, target_rng);

    SearchSetup setup = spec.setup;
    if (spec.algorithm == Algorithm::kRefinementOnly) {
        setup.planner.objective.exploration_weight = 0.0;
    }

    UavState initial = spec.initial_uav;
    initial.position = spec.start;
    SearchState state = make_search_state(setup, spec.start, initial, spec.grid_spacing);

    std::vector<Vec3> sweep;
    if (spec.algorithm == Algorithm::kLawnmower) {
        sweep = lawnmower_waypoints(spec.env, spec.lawnmower.spacing_xy, spec.lawnmower.layer_dz);
    }

    RunRecord record;
    record.seed = seed;
    record.truth = truth.positions;

    std::vector<double> previous_bonus = state.field.grid.values();
    double min_obstacle = std::numeric_limits<double>::infinity();
    double plan_seconds = 0.0;

    for (int k = 0; k < spec.max_steps; ++k) {
        std::optional<Vec3> forced;
        if (spec.algorithm == Algorithm::kLawnmower) {
            forced = sweep[static_cast<std::size_t>(k) % sweep.size()];
        }
        const StepRecord step =
            search_step(state, truth, setup, sensor_rng, filter_rng, cluster_rng, forced);
        plan_seconds += step.plan_seconds;
        if (step.min_obstacle_distance >= 0.0) {
            min_obstacle = std::min(min_obstacle, step.min_obstacle_distance);
        }

        const std::vector<double>& bonus = state.field.grid.values();
        for (std::size_t i = 0; i < bonus.size(); ++i) {
            if (bonus[i] > previous_bonus[i] + 1e-15) record.bonus_monotone = false;
        }
        previous_bonus = bonus;

        if (!record.steps_to_all_found && truth.count() > 0 &&
            static_cast<int>(state.found.size()) >= truth.count()) {
            record.steps_to_all_found = state.step;  // steps executed so far
        }
        if (spec.stop_when_all_found && record.steps_to_all_found) break;
    }

    record.steps = state.records;
    record.found = state.found;
    record.mean_plan_seconds =
        record.steps.empty() ? 0.0 : plan_seconds / static_cast<double>(record.steps.size());
    record.min_obstacle_distance =
        std::isfinite(min_obstacle) ? min_obstacle : -1.0;

    std::size_t below = 0;
    for (double v : state.field.grid.values()) {
        if (v < 0.5) ++below;
    }
    record.bonus_below_half_fraction =
        static_cast<double>(below) / static_cast<double>(state.field.grid.node_count());

    if (!record.found.empty()) {
        std::vector<Vec3> found_positions;
        found_positions.reserve(record.found.size());
        for (const FoundTarget& f : record.found) found_positions.push_back(f.position);
        const double penalty = 3.0 * setup.thresholds.max_radius;
        const MatchResult match = match_found_to_truth(found_positions, record.truth, penalty);
        record.rmse = match.rmse;
        record.matched_truth = match.truth_index;
        record.match_dist = match.distance;
    }
    return record;
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentSpec& spec) {
    if (spec.seeds.empty()) throw std::invalid_argument("experiment needs at least one seed");
    if (spec.max_steps <= 0) throw std::invalid_argument("max_steps must be positive");
    if (spec.algorithm == Algorithm::kLawnmower &&
        lawnmower_waypoints(spec.env, spec.lawnmower.spacing_xy, spec.lawnmower.layer_dz)
            .empty()) {
        throw std::invalid_argument("lawnmower sweep is empty");
    }

    std::vector<std::future<RunRecord>> futures;
    futures.reserve(spec.seeds.size());
    for (std::uint64_t seed : spec.seeds) {
        futures.push_back(
            std::async(std::launch::async, [&spec, seed] { return run_single(spec, seed); }));
    }
    std::vector<RunRecord> records;
    records.reserve(spec.seeds.size());
    for (auto& f : futures) records.push_back(f.get());
    return records;
}

AggregateMetrics aggregate(const std::vector<RunRecord>& records) {
    if (records.size() < 2) {
        throw std::invalid_argument("aggregate: need at least two run records");
    }
    AggregateMetrics metrics;

    std::size_t longest = 0;
    for (const RunRecord& r : records) longest = std::max(longest, r.steps.size());

    // Runs that stopped early (everything found) hold their final count.
    std::vector<double> samples(records.size());
    for (std::size_t k = 0; k < longest; ++k) {
        for (std::size_t r = 0; r < records.size(); ++r) {
            const auto& steps = records[r].steps;
            if (steps.empty()) {
                samples[r] = 0.0;
            } else {
                samples[r] = static_cast<double>(
                    steps[std::min(k, steps.size() - 1)].found_total);
            }
        }
        const MeanCI ci = mean_confidence(samples);
        metrics.mean_detections.push_back(ci.mean);
        metrics.detections_half_width.push_back(ci.half_width);
    }

    std::vector<double> steps_to_done;
    std::vector<double> rmse_values;
    std::vector<double> plan_times;
    for (const RunRecord& r : records) {
        steps_to_done.push_back(static_cast<double>(
            r.steps_to_all_found ? *r.steps_to_all_found : static_cast<int>(r.steps.size())));
        if (r.rmse) rmse_values.push_back(*r.rmse);
        plan_times.push_back(r.mean_plan_seconds);
    }
    metrics.steps_to_all_found = mean_confidence(steps_to_done);
    metrics.plan_seconds = mean_confidence(plan_times);
    if (rmse_values.size() >= 2) metrics.rmse = mean_confidence(rmse_values);

    return metrics;
}

}  // namespace targetsearch
