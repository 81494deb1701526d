#include "targetsearch/config_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace targetsearch {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError(where + ": unknown key '" + item.key() + "'");
        }
    }
}

Vec3 parse_vec3(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 3) throw ConfigError(where + ": expected [x, y, z]");
    return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

Eigen::Vector2d parse_vec2(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) throw ConfigError(where + ": expected [x, y]");
    return Eigen::Vector2d(v[0].get<double>(), v[1].get<double>());
}

Environment parse_env(const json& j) {
    require_keys(j, "env", {"lower", "upper", "dimensionality"});
    if (!j.contains("lower") || !j.contains("upper")) {
        throw ConfigError("env: lower and upper are required");
    }
    const Vec3 lower = parse_vec3(j["lower"], "env.lower");
    const Vec3 upper = parse_vec3(j["upper"], "env.upper");
    const int dim = j.value("dimensionality", 3);
    if (dim == 3) return Environment::box3(lower, upper);
    if (dim == 2) {
        if (lower.z() != upper.z()) {
            throw ConfigError("env: a 2D environment needs lower.z == upper.z");
        }
        return Environment::box2(lower.head<2>(), upper.head<2>(), lower.z());
    }
    throw ConfigError("env.dimensionality must be 2 or 3");
}

TargetGenerator parse_targets(const json& j, const Environment& env) {
    require_keys(j, "targets", {"generator", "count", "margin", "clusters", "per_cluster",
                                "spread", "positions"});
    TargetGenerator gen;
    const std::string kind = j.value("generator", std::string("uniform"));
    gen.margin = j.value("margin", 20.0);
    if (kind == "uniform" || kind == "clustered") {
        const int active = env.dimensionality == 2 ? 2 : 3;
        for (int a = 0; a < active; ++a) {
            if (env.lower[a] + gen.margin > env.upper[a] - gen.margin) {
                throw ConfigError("targets.margin leaves no room inside env");
            }
        }
    }
    if (kind == "uniform") {
        gen.kind = TargetGenerator::Kind::kUniform;
        gen.count = j.value("count", 6);
        if (gen.count < 0) throw ConfigError("targets.count must be >= 0");
    } else if (kind == "clustered") {
        gen.kind = TargetGenerator::Kind::kClustered;
        gen.clusters = j.value("clusters", 2);
        gen.per_cluster = j.value("per_cluster", 3);
        gen.spread = j.value("spread", 8.0);
        if (gen.clusters < 0 || gen.per_cluster < 0) {
            throw ConfigError("targets: cluster counts must be >= 0");
        }
    } else if (kind == "manual") {
        gen.kind = TargetGenerator::Kind::kManual;
        if (!j.contains("positions")) throw ConfigError("targets: manual needs positions");
        for (const auto& p : j["positions"]) {
            const Vec3 pos = parse_vec3(p, "targets.positions");
            if (!env.contains(pos)) throw ConfigError("targets: manual position outside env");
            gen.manual.push_back(pos);
        }
    } else if (kind == "none") {
        gen.kind = TargetGenerator::Kind::kNone;
    } else {
        throw ConfigError("targets.generator must be uniform|clustered|manual|none");
    }
    return gen;
}

SensorModel parse_sensor(const json& j, const Environment& env) {
    require_keys(j, "sensor", {"mode", "G", "F", "sigma", "half_extent", "R2"});
    const std::string mode = j.value("mode", std::string("range-3d"));
    if (mode == "range-3d") {
        SensorConfig3D cfg;
        cfg.peak_detection = j.value("G", 0.98);
        if (j.contains("F")) cfg.fov_scale = parse_vec3(j["F"], "sensor.F");
        cfg.noise_sigma = j.value("sigma", 0.5);
        if (!(cfg.peak_detection > 0.0 && cfg.peak_detection <= 1.0)) {
            throw ConfigError("sensor.G must be in (0, 1]");
        }
        if (!(cfg.fov_scale.minCoeff() > 0.0)) throw ConfigError("sensor.F must be positive");
        if (cfg.noise_sigma < 0.0) throw ConfigError("sensor.sigma must be >= 0");
        return SensorModel::range3d(cfg);
    }
    if (mode == "binary-2d") {
        SensorConfig2D cfg;
        if (j.contains("half_extent")) {
            cfg.half_extent = parse_vec2(j["half_extent"], "sensor.half_extent");
        }
        if (j.contains("R2")) cfg.noise_var = parse_vec2(j["R2"], "sensor.R2");
        if (!(cfg.half_extent.minCoeff() > 0.0) || !(cfg.noise_var.minCoeff() > 0.0)) {
            throw ConfigError("sensor: half_extent and R2 must be positive");
        }
        return SensorModel::binary_fov2d(cfg, env.lower.z());
    }
    throw ConfigError("sensor.mode must be range-3d or binary-2d");
}

FilterConfig parse_filter(const json& j) {
    require_keys(j, "filter",
                 {"p_s", "birth_count", "birth_mass", "particles_per_target", "max_particles"});
    FilterConfig cfg;
    cfg.survival_prob = j.value("p_s", 1.0);
    cfg.birth_count = j.value("birth_count", 130);
    cfg.birth_mass = j.value("birth_mass", 0.2);
    cfg.particles_per_target = j.value("particles_per_target", 400);
    cfg.max_particles = j.value("max_particles", 5000);
    if (cfg.survival_prob < 0.0 || cfg.survival_prob > 1.0) {
        throw ConfigError("filter.p_s must be in [0, 1]");
    }
    if (cfg.birth_count < 0 || cfg.birth_mass < 0.0) {
        throw ConfigError("filter: birth settings must be non-negative");
    }
    if (cfg.particles_per_target <= 0 || cfg.max_particles < cfg.particles_per_target) {
        throw ConfigError("filter: need max_particles >= particles_per_target > 0");
    }
    return cfg;
}

Thresholds parse_thresholds(const json& j) {
    require_keys(j, "thresholds", {"T_r", "T_m", "T_z"});
    Thresholds t;
    t.max_radius = j.value("T_r", 1.1);
    t.min_mass = j.value("T_m", 2.2);
    t.gating_distance = j.value("T_z", 5.0);
    if (!(t.max_radius > 0.0 && t.min_mass > 0.0 && t.gating_distance > 0.0)) {
        throw ConfigError("thresholds must be positive");
    }
    return t;
}

PlannerConfig parse_planner(const json& j, const Thresholds& thresholds,
                            const SensorModel& sensor) {
    require_keys(j, "planner", {"tau", "alpha", "mode", "moveset", "step_length"});
    PlannerConfig cfg;
    cfg.horizon = j.value("tau", 1);
    if (cfg.horizon < 1) throw ConfigError("planner.tau must be >= 1");

    const std::string moveset = j.value("moveset", std::string("axes-3d"));
    const double step = j.value("step_length", moveset == "compass-2d" ? 0.2 : 12.0);
    if (!(step > 0.0)) throw ConfigError("planner.step_length must be positive");
    if (moveset == "axes-3d") {
        cfg.moves = MoveSet::axes3d(step);
    } else if (moveset == "compass-2d") {
        cfg.moves = MoveSet::compass2d(step);
    } else {
        throw ConfigError("planner.moveset must be axes-3d or compass-2d");
    }

    const std::string mode = j.value("mode", std::string("center-prob"));
    if (mode == "center-prob") {
        cfg.objective.mode = RefinementMode::kCenterProb;
    } else if (mode == "mi") {
        cfg.objective.mode = RefinementMode::kMiSurrogate;
    } else {
        throw ConfigError("planner.mode must be center-prob or mi");
    }

    // Default balance: one confident cluster roughly offsets one fully
    // unexplored waypoint.
    const double peak =
        sensor.mode() == SensorMode::kRange3D ? sensor.config3d().peak_detection : 1.0;
    cfg.objective.exploration_weight = j.value("alpha", thresholds.min_mass / peak);
    if (cfg.objective.exploration_weight < 0.0) throw ConfigError("planner.alpha must be >= 0");
    return cfg;
}

void parse_vehicle(const json& j, SearchSetup& setup, UavState& initial,
                   VehicleMode& mode) {
    require_keys(j, "vehicle",
                 {"mode", "m", "g", "D", "L", "w", "K_g1", "K_g2", "K_g3", "k_obs", "d_l", "dt",
                  "t_max", "tolerance", "as_printed", "initial_theta"});
    const std::string mode_name = j.value("mode", std::string("dynamic"));
    if (mode_name == "dynamic") {
        mode = VehicleMode::kDynamic;
    } else if (mode_name == "kinematic") {
        mode = VehicleMode::kKinematic;
    } else {
        throw ConfigError("vehicle.mode must be dynamic or kinematic");
    }
    setup.uav_params.mass = j.value("m", 10.0);
    setup.uav_params.gravity = j.value("g", 9.8);
    setup.uav_params.drag = j.value("D", 0.9);
    setup.uav_params.lift = j.value("L", 0.7);
    if (j.contains("w")) setup.uav_params.wind = parse_vec3(j["w"], "vehicle.w");
    setup.uav_params.literal_east_term = j.value("as_printed", false);
    if (!(setup.uav_params.mass > 0.0 && setup.uav_params.gravity > 0.0)) {
        throw ConfigError("vehicle: mass and gravity must be positive");
    }
    setup.gains.gain1 = j.value("K_g1", 9.0);
    setup.gains.gain2 = j.value("K_g2", 9.0);
    setup.gains.gain3 = j.value("K_g3", 9.0);
    setup.gains.obstacle_gain = j.value("k_obs", 5.0);
    setup.gains.danger_distance = j.value("d_l", 6.0);
    if (!(setup.gains.gain1 > 0.0 && setup.gains.gain2 > 0.0 && setup.gains.gain3 > 0.0 &&
          setup.gains.obstacle_gain > 0.0 && setup.gains.danger_distance > 0.0)) {
        throw ConfigError("vehicle: gains must be positive");
    }
    setup.track.dt = j.value("dt", 0.01);
    setup.track.t_max = j.value("t_max", 10.0);
    setup.track.tolerance = j.value("tolerance", 0.5);
    if (!(setup.track.dt > 0.0)) throw ConfigError("vehicle.dt must be positive");
    if (j.contains("initial_theta")) {
        const json& t = j["initial_theta"];
        if (!t.is_array() || t.size() != 4) {
            throw ConfigError("vehicle.initial_theta: expected [Va, beta, gamma, phi]");
        }
        initial.airspeed = t[0].get<double>();
        initial.heading = t[1].get<double>();
        initial.pitch = t[2].get<double>();
        initial.roll = t[3].get<double>();
        if (!(initial.airspeed > 0.0)) throw ConfigError("vehicle: initial airspeed must be > 0");
    }
}

ObstacleSet parse_obstacles(const json& j) {
    require_keys(j, "obstacles", {"centers", "collision_radius"});
    ObstacleSet obs;
    obs.collision_radius = j.value("collision_radius", 2.0);
    if (j.contains("centers")) {
        for (const auto& c : j["centers"]) {
            obs.centers.push_back(parse_vec3(c, "obstacles.centers"));
        }
    }
    return obs;
}

ExperimentSpec parse_spec(const json& root) {
    require_keys(root, "config",
                 {"name", "env", "targets", "obstacles", "algorithm", "sensor", "filter",
                  "thresholds", "planner", "vehicle", "exploration_grid", "start", "seeds",
                  "max_steps", "stop_when_all_found", "lawnmower"});
    if (!root.contains("env")) throw ConfigError("config: env is required");
    if (!root.contains("seeds")) throw ConfigError("config: seeds is required");
    if (!root.contains("max_steps")) throw ConfigError("config: max_steps is required");

    ExperimentSpec spec;
    spec.name = root.value("name", std::string("run"));
    spec.env = parse_env(root["env"]);
    spec.setup.env = spec.env;
    spec.targets = root.contains("targets") ? parse_targets(root["targets"], spec.env)
                                            : TargetGenerator{};

    const std::string algorithm = root.value("algorithm", std::string("proposed"));
    if (algorithm == "proposed") {
        spec.algorithm = Algorithm::kProposed;
    } else if (algorithm == "lawnmower") {
        spec.algorithm = Algorithm::kLawnmower;
    } else if (algorithm == "refinement-only") {
        spec.algorithm = Algorithm::kRefinementOnly;
    } else {
        throw ConfigError("algorithm must be proposed|lawnmower|refinement-only");
    }

    spec.setup.sensor = root.contains("sensor") ? parse_sensor(root["sensor"], spec.env)
                                                : SensorModel::range3d(SensorConfig3D{});
    spec.setup.filter = root.contains("filter") ? parse_filter(root["filter"]) : FilterConfig{};
    spec.setup.thresholds =
        root.contains("thresholds") ? parse_thresholds(root["thresholds"]) : Thresholds{};
    spec.setup.planner =
        parse_planner(root.contains("planner") ? root["planner"] : json::object(),
                      spec.setup.thresholds, spec.setup.sensor);
    if (root.contains("vehicle")) {
        parse_vehicle(root["vehicle"], spec.setup, spec.initial_uav, spec.setup.vehicle_mode);
    }
    if (root.contains("obstacles")) spec.setup.obstacles = parse_obstacles(root["obstacles"]);
    if (spec.setup.obstacles.collision_radius >= spec.setup.gains.danger_distance) {
        throw ConfigError("obstacles.collision_radius must be below vehicle.d_l");
    }

    if (root.contains("exploration_grid")) {
        require_keys(root["exploration_grid"], "exploration_grid", {"spacing"});
        spec.grid_spacing = root["exploration_grid"].value("spacing", 10.0);
        if (!(spec.grid_spacing > 0.0)) throw ConfigError("exploration_grid.spacing must be > 0");
    }

    if (root.contains("start")) spec.start = parse_vec3(root["start"], "start");
    if (spec.env.dimensionality == 2) spec.start.z() = spec.env.lower.z();
    if (!spec.env.contains(spec.start)) throw ConfigError("start must lie inside env");

    for (const auto& s : root["seeds"]) {
        spec.seeds.push_back(s.get<std::uint64_t>());
    }
    if (spec.seeds.empty()) throw ConfigError("seeds must be non-empty");

    spec.max_steps = root["max_steps"].get<int>();
    if (spec.max_steps <= 0) throw ConfigError("max_steps must be positive");
    spec.stop_when_all_found = root.value("stop_when_all_found", false);

    if (root.contains("lawnmower")) {
        require_keys(root["lawnmower"], "lawnmower", {"spacing_xy", "layer_dz"});
        spec.lawnmower.spacing_xy = root["lawnmower"].value("spacing_xy", 48.0);
        spec.lawnmower.layer_dz = root["lawnmower"].value("layer_dz", 48.0);
        if (!(spec.lawnmower.spacing_xy > 0.0 && spec.lawnmower.layer_dz > 0.0)) {
            throw ConfigError("lawnmower spacings must be positive");
        }
    }
    return spec;
}

}  // namespace

ExperimentSpec parse_experiment(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_spec(root);
}

ExperimentSpec load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_experiment(buffer.str());
}

namespace {

int count_key(const json& node, const std::string& name, json*& hit) {
    int found = 0;
    if (!node.is_object()) return 0;
    for (auto& item : const_cast<json&>(node).items()) {
        if (item.key() == name && item.value().is_number()) {
            hit = &item.value();
            ++found;
        }
        if (item.value().is_object()) found += count_key(item.value(), name, hit);
    }
    return found;
}

}  // namespace

std::string override_parameter(const std::string& json_text, const std::string& name,
                               double value) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    json* slot = nullptr;
    if (name.find('.') != std::string::npos) {
        json* node = &root;
        std::size_t begin = 0;
        while (true) {
            const std::size_t dot = name.find('.', begin);
            const std::string key = name.substr(begin, dot - begin);
            if (!node->is_object() || !node->contains(key)) {
                throw ConfigError("parameter path not found: " + name);
            }
            node = &(*node)[key];
            if (dot == std::string::npos) break;
            begin = dot + 1;
        }
        slot = node;
    } else {
        const int hits = count_key(root, name, slot);
        if (hits == 0) throw ConfigError("parameter not found: " + name);
        if (hits > 1) throw ConfigError("parameter name is ambiguous, use a dotted path: " + name);
    }
    if (slot == nullptr || !slot->is_number()) {
        throw ConfigError("parameter is not numeric: " + name);
    }
    if (slot->is_number_integer() && value == std::floor(value)) {
        *slot = static_cast<std::int64_t>(value);
    } else {
        *slot = value;
    }
    // Re-validate eagerly so sweeps fail fast on bad values.
    parse_spec(root);
    return root.dump(2);
}

}  // namespace targetsearch
