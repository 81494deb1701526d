#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "targetsearch/config_io.hpp"
#include "targetsearch/report.hpp"

namespace py = pybind11;
using namespace targetsearch;

namespace {

py::dict summarize(const RunRecord& r) {
    py::dict d;
    d["seed"] = r.seed;
    d["steps"] = r.steps.size();
    d["n_true"] = r.truth.size();
    d["n_found"] = r.found.size();
    d["steps_to_all_found"] =
        r.steps_to_all_found ? py::cast(*r.steps_to_all_found) : py::none();
    d["rmse_found"] = r.rmse ? py::cast(*r.rmse) : py::none();
    d["min_obstacle_distance"] = r.min_obstacle_distance;
    d["bonus_below_half_fraction"] = r.bonus_below_half_fraction;
    d["bonus_monotone"] = r.bonus_monotone;
    py::list found;
    for (const FoundTarget& f : r.found) {
        found.append(py::make_tuple(f.step, f.position.x(), f.position.y(), f.position.z()));
    }
    d["found"] = found;
    py::list detections;
    for (const StepRecord& s : r.steps) detections.append(s.found_total);
    d["detections"] = detections;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multi-target search: intensity filter, planner and simulation harness";

    py::class_<Environment>(m, "Environment")
        .def_static("box3", &Environment::box3, py::arg("lower"), py::arg("upper"))
        .def_static("box2", &Environment::box2, py::arg("lower"), py::arg("upper"),
                    py::arg("plane_z") = 0.0)
        .def("contains", &Environment::contains)
        .def("clamp", &Environment::clamp)
        .def_readonly("lower", &Environment::lower)
        .def_readonly("upper", &Environment::upper)
        .def_readonly("dimensionality", &Environment::dimensionality);

    py::class_<RandomSource>(m, "RandomSource")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream") = 0)
        .def("stream", &RandomSource::stream)
        .def("uniform01", &RandomSource::uniform01)
        .def("normal", py::overload_cast<>(&RandomSource::normal))
        .def("next_u64", &RandomSource::next_u64);

    py::class_<SensorConfig3D>(m, "SensorConfig3D")
        .def(py::init<>())
        .def_readwrite("peak_detection", &SensorConfig3D::peak_detection)
        .def_readwrite("fov_scale", &SensorConfig3D::fov_scale)
        .def_readwrite("noise_sigma", &SensorConfig3D::noise_sigma);

    py::class_<SensorConfig2D>(m, "SensorConfig2D")
        .def(py::init<>())
        .def_readwrite("half_extent", &SensorConfig2D::half_extent)
        .def_readwrite("noise_var", &SensorConfig2D::noise_var);

    py::class_<Measurement>(m, "Measurement")
        .def(py::init<>())
        .def_readwrite("range", &Measurement::range)
        .def_readwrite("bearing", &Measurement::bearing)
        .def_readwrite("elevation", &Measurement::elevation);

    py::class_<TargetSet>(m, "TargetSet")
        .def(py::init<>())
        .def_readwrite("positions", &TargetSet::positions);

    py::class_<SensorModel>(m, "SensorModel")
        .def_static("range3d", &SensorModel::range3d)
        .def_static("binary_fov2d", &SensorModel::binary_fov2d, py::arg("cfg"),
                    py::arg("plane_z") = 0.0)
        .def("detect_prob", &SensorModel::detect_prob)
        .def("measurement_density", &SensorModel::measurement_density)
        .def("inverse", &SensorModel::inverse)
        .def("sense", &SensorModel::sense);

    m.def("detection_prob", &detection_prob, py::arg("target"), py::arg("sensor_pos"),
          py::arg("cfg"));
    m.def("detection_prob_2d", &detection_prob_2d);
    m.def("measure_one", &measure_one, py::arg("target"), py::arg("sensor_pos"));
    m.def("inverse_measure", &inverse_measure, py::arg("z"), py::arg("sensor_pos"));

    py::class_<ParticleSet>(m, "ParticleSet")
        .def(py::init<>())
        .def_readwrite("positions", &ParticleSet::positions)
        .def_readwrite("weights", &ParticleSet::weights)
        .def("__len__", &ParticleSet::size);

    py::class_<FilterConfig>(m, "FilterConfig")
        .def(py::init<>())
        .def_readwrite("survival_prob", &FilterConfig::survival_prob)
        .def_readwrite("birth_count", &FilterConfig::birth_count)
        .def_readwrite("birth_mass", &FilterConfig::birth_mass)
        .def_readwrite("particles_per_target", &FilterConfig::particles_per_target)
        .def_readwrite("max_particles", &FilterConfig::max_particles);

    m.def("expected_count", &expected_count);
    m.def("predict", &predict, py::arg("particles"), py::arg("measurements"),
          py::arg("sensor_pos"), py::arg("sensor"), py::arg("cfg"), py::arg("rng"));
    m.def("update", &update, py::arg("particles"), py::arg("measurements"),
          py::arg("sensor_pos"), py::arg("sensor"));
    m.def("resample", &resample, py::arg("particles"), py::arg("cfg"), py::arg("rng"));

    py::class_<Cluster>(m, "Cluster")
        .def_readonly("center", &Cluster::center)
        .def_readonly("radius", &Cluster::radius)
        .def_readonly("mass", &Cluster::mass)
        .def_readonly("members", &Cluster::members);

    py::class_<Thresholds>(m, "Thresholds")
        .def(py::init<>())
        .def_readwrite("max_radius", &Thresholds::max_radius)
        .def_readwrite("min_mass", &Thresholds::min_mass)
        .def_readwrite("gating_distance", &Thresholds::gating_distance);

    m.def("choose_cluster_count", &choose_cluster_count);
    m.def("kmeans_clusters", &kmeans_clusters, py::arg("particles"), py::arg("cluster_count"),
          py::arg("rng"), py::arg("max_iterations") = 50);

    py::class_<ExplorationField>(m, "ExplorationField")
        .def_static("initial", &ExplorationField::initial, py::arg("env"), py::arg("spacing"))
        .def("sample", [](const ExplorationField& f, const Vec3& p) { return f.grid.sample(p); })
        .def("values", [](const ExplorationField& f) { return f.grid.values(); });

    m.def("bonus_update", &bonus_update, py::arg("field"), py::arg("sensor_pos"),
          py::arg("sensor"));
    m.def("exploration_score",
          [](const ExplorationField& f, const std::vector<Vec3>& seq) {
              return exploration_score(f, seq);
          });
    m.def("mi_surrogate_score",
          [](const ParticleSet& p, const std::vector<Vec3>& seq, const SensorModel& s) {
              return mi_surrogate_score(p, seq, s);
          });
    m.def("center_prob_score",
          [](const std::vector<Cluster>& c, const std::vector<Vec3>& seq,
             const SensorModel& s) { return center_prob_score(c, seq, s); });

    py::class_<UavState>(m, "UavState")
        .def(py::init<>())
        .def_readwrite("position", &UavState::position)
        .def_readwrite("airspeed", &UavState::airspeed)
        .def_readwrite("heading", &UavState::heading)
        .def_readwrite("pitch", &UavState::pitch)
        .def_readwrite("roll", &UavState::roll);

    py::class_<UavParams>(m, "UavParams")
        .def(py::init<>())
        .def_readwrite("mass", &UavParams::mass)
        .def_readwrite("gravity", &UavParams::gravity)
        .def_readwrite("drag", &UavParams::drag)
        .def_readwrite("lift", &UavParams::lift)
        .def_readwrite("wind", &UavParams::wind);

    py::class_<ControlGains>(m, "ControlGains").def(py::init<>());
    py::class_<ObstacleSet>(m, "ObstacleSet")
        .def(py::init<>())
        .def_readwrite("centers", &ObstacleSet::centers)
        .def_readwrite("collision_radius", &ObstacleSet::collision_radius);
    py::class_<TrackOptions>(m, "TrackOptions")
        .def(py::init<>())
        .def_readwrite("dt", &TrackOptions::dt)
        .def_readwrite("t_max", &TrackOptions::t_max)
        .def_readwrite("tolerance", &TrackOptions::tolerance);
    py::class_<TrackResult>(m, "TrackResult")
        .def_readonly("state", &TrackResult::state)
        .def_readonly("trajectory", &TrackResult::trajectory)
        .def_readonly("reached", &TrackResult::reached)
        .def_readonly("singular", &TrackResult::singular);

    m.def("track_to", &track_to, py::arg("start"), py::arg("target"), py::arg("gains"),
          py::arg("params"), py::arg("obstacles"), py::arg("options"));
    m.def("kinematic_move", &kinematic_move);
    m.def("lawnmower_waypoints", &lawnmower_waypoints, py::arg("env"), py::arg("spacing_xy"),
          py::arg("layer_dz"));
    m.def("rmse_found",
          [](const std::vector<Vec3>& found, const std::vector<Vec3>& truth, double penalty) {
              const auto value = rmse_found(found, truth, penalty);
              return value ? py::cast(*value) : py::object(py::none());
          });

    // Harness entry point: run a JSON experiment document; optionally write
    // the CSV/SVG artifacts to out_dir.
    m.def(
        "run_experiment_json",
        [](const std::string& json_text, const py::object& out_dir) {
            const ExperimentSpec spec = parse_experiment(json_text);
            const std::vector<RunRecord> records = run_experiment(spec);
            if (!out_dir.is_none()) {
                write_run_outputs(out_dir.cast<std::string>(), spec, records);
            }
            py::list out;
            for (const RunRecord& r : records) out.append(summarize(r));
            return out;
        },
        py::arg("json_text"), py::arg("out_dir") = py::none());

    py::register_exception<ConfigError>(m, "ConfigError");
}
