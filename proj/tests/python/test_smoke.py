import json
import math

import pytest

import targetsearch as ts


def test_detection_probability_matches_the_profile():
    cfg = ts.SensorConfig3D()
    q = [0.0, 0.0, 0.0]
    assert ts.detection_prob(q, q, cfg) == pytest.approx(0.98)
    at_f = ts.detection_prob([25.0, 0.0, 0.0], q, cfg)
    assert at_f == pytest.approx(0.98 * math.exp(-0.5), rel=1e-12)


def test_measure_and_inverse_round_trip():
    z = ts.measure_one([3.0, 4.0, 12.0], [0.0, 0.0, 0.0])
    assert z.range == pytest.approx(13.0)
    assert z.bearing == pytest.approx(math.atan2(4.0, 3.0))
    back = ts.inverse_measure(z, [0.0, 0.0, 0.0])
    assert list(back) == pytest.approx([3.0, 4.0, 12.0], abs=1e-9)


def test_update_without_measurements_scales_by_miss_probability():
    sensor = ts.SensorModel.range3d(ts.SensorConfig3D())
    particles = ts.ParticleSet()
    particles.positions = [[0.0, 0.0, 0.0], [30.0, 0.0, 0.0]]
    particles.weights = [0.5, 0.5]
    out = ts.update(particles, [], [0.0, 0.0, 0.0], sensor)
    for position, before, after in zip(particles.positions, particles.weights, out.weights):
        miss = 1.0 - sensor.detect_prob(position, [0.0, 0.0, 0.0])
        assert after == pytest.approx(miss * before, rel=1e-12)


def test_resample_preserves_mass():
    rng = ts.RandomSource(7)
    particles = ts.ParticleSet()
    particles.positions = [[float(i), 0.0, 0.0] for i in range(40)]
    particles.weights = [0.05] * 40
    out = ts.resample(particles, ts.FilterConfig(), rng)
    assert ts.expected_count(out) == pytest.approx(2.0, abs=1e-9)


def test_lawnmower_covers_the_flat_arena():
    env = ts.Environment.box2([0.0, 0.0], [2.0, 2.0], 1.0)
    waypoints = ts.lawnmower_waypoints(env, 0.5, 1.0)
    assert len(waypoints) == 25
    assert all(w[2] == 1.0 for w in waypoints)


def test_run_experiment_is_deterministic(tmp_path):
    config = {
        "name": "pysmoke",
        "env": {"lower": [0, 0, 0], "upper": [60, 60, 60]},
        "targets": {"generator": "manual", "positions": [[30, 30, 30]]},
        "algorithm": "proposed",
        "sensor": {"G": 0.98, "F": [9, 9, 9], "sigma": 0.02},
        "filter": {"birth_mass": 0.05, "particles_per_target": 200},
        "thresholds": {"T_r": 1.1, "T_m": 0.75, "T_z": 5.0},
        "planner": {"tau": 1, "alpha": 2.24, "moveset": "axes-3d", "step_length": 12.0},
        "vehicle": {"mode": "kinematic"},
        "start": [30, 30, 30],
        "seeds": [1, 2],
        "max_steps": 40,
    }
    text = json.dumps(config)
    first = ts.run_experiment_json(text, str(tmp_path / "out"))
    second = ts.run_experiment_json(text)
    assert [r["detections"] for r in first] == [r["detections"] for r in second]
    assert (tmp_path / "out" / "steps.csv").exists()
    assert first[0]["n_found"] >= 1  # the target sits under the vehicle


def test_bad_config_raises():
    with pytest.raises(ts.ConfigError):
        ts.run_experiment_json("{\"bogus\": true}")
