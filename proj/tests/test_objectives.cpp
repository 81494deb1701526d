#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "targetsearch/objectives.hpp"

using namespace targetsearch;

namespace {
const SensorModel kSensor = SensorModel::range3d(SensorConfig3D{});
const Environment kEnv = Environment::box3(Vec3(0, 0, 0), Vec3(100, 100, 100));
}

TEST_CASE("bonus_update decays nodes by their observation probability") {
    // Narrow footprint so the far corner sits hundreds of scale lengths away.
    SensorConfig3D cfg;
    cfg.fov_scale = Vec3(1.0, 1.0, 1.0);
    const SensorModel sensor = SensorModel::range3d(cfg);

    ExplorationField field = ExplorationField::initial(kEnv, 10.0);
    const Vec3 q(50, 50, 50);  // exactly on a node
    bonus_update(field, q, sensor);
    CHECK(field.grid.sample(q) == doctest::Approx(0.02).epsilon(1e-12));

    // A node far outside the footprint is untouched within floating-point noise.
    CHECK(field.grid.sample(Vec3(0, 0, 0)) == doctest::Approx(1.0).epsilon(1e-12));

    bonus_update(field, q, sensor);
    CHECK(field.grid.sample(q) == doctest::Approx(4e-4).epsilon(1e-9));
}

TEST_CASE("bonus stays in [0,1] and never increases") {
    ExplorationField field = ExplorationField::initial(kEnv, 20.0);
    RandomSource rng(61);
    std::vector<double> previous = field.grid.values();
    for (int step = 0; step < 30; ++step) {
        const Vec3 q(rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100));
        bonus_update(field, q, kSensor);
        const auto& now = field.grid.values();
        for (std::size_t i = 0; i < now.size(); ++i) {
            CHECK(now[i] >= 0.0);
            CHECK(now[i] <= 1.0);
            CHECK(now[i] <= previous[i]);
        }
        previous = now;
    }
}

TEST_CASE("exploration_score sums the interpolated bonus along the sequence") {
    ExplorationField ones = ExplorationField::initial(kEnv, 10.0);
    const std::vector<Vec3> seq = {Vec3(12, 0, 0), Vec3(24, 0, 0), Vec3(36, 0, 0)};
    CHECK(exploration_score(ones, seq) == doctest::Approx(3.0).epsilon(1e-12));

    ExplorationField zeros(ScalarGrid::cover(kEnv, 10.0, 0.0));
    CHECK(exploration_score(zeros, seq) == doctest::Approx(0.0));
}

TEST_CASE("exploration_score agrees with the corner-weight oracle mid-cell") {
    ExplorationField field = ExplorationField::initial(kEnv, 10.0);
    RandomSource rng(62);
    for (auto& v : field.grid.values()) v = rng.uniform01();

    const Vec3 p(13.0, 25.0, 77.5);  // fractional offsets (0.3, 0.5, 0.75) in cell (1,2,7)
    std::array<double, 8> corner{};
    for (int c = 0; c < 8; ++c) {
        corner[c] = field.grid.at(1 + (c & 1), 2 + ((c >> 1) & 1), 7 + ((c >> 2) & 1));
    }
    const double expected = oracles::trilinear_corners(corner, 0.3, 0.5, 0.75);
    CHECK(exploration_score(field, std::vector<Vec3>{p}) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("exploration_score is monotone in the field") {
    RandomSource rng(63);
    ExplorationField low = ExplorationField::initial(kEnv, 25.0);
    ExplorationField high = ExplorationField::initial(kEnv, 25.0);
    for (std::size_t i = 0; i < low.grid.values().size(); ++i) {
        low.grid.values()[i] = rng.uniform01() * 0.5;
        high.grid.values()[i] = low.grid.values()[i] + rng.uniform01() * 0.5;
    }
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Vec3> seq;
        for (int j = 0; j < 3; ++j) {
            seq.emplace_back(rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100));
        }
        CHECK(exploration_score(high, seq) >= exploration_score(low, seq));
    }
}

TEST_CASE("center probability score") {
    const std::vector<Vec3> seq1 = {Vec3(10, 10, 10)};
    CHECK(center_prob_score({}, seq1, kSensor) == 0.0);

    std::vector<Cluster> clusters(1);
    clusters[0].center = Vec3(10, 10, 10);
    CHECK(center_prob_score(clusters, seq1, kSensor) == doctest::Approx(0.98).epsilon(1e-12));

    clusters.resize(2);
    clusters[1].center = Vec3(40, 10, 10);
    const std::vector<Vec3> seq2 = {Vec3(10, 10, 10), Vec3(22, 10, 10)};
    double hand_sum = 0.0;
    for (const Vec3& q : seq2) {
        for (const Cluster& c : clusters) {
            hand_sum += 0.98 * std::exp(-((c.center - q).norm() / 25.0) / 2.0);
        }
    }
    CHECK(center_prob_score(clusters, seq2, kSensor) ==
          doctest::Approx(hand_sum).epsilon(1e-12));
}

TEST_CASE("MI surrogate equals the brute-force double sum") {
    const std::vector<Vec3> seq1 = {Vec3(0, 0, 0)};
    CHECK(mi_surrogate_score(ParticleSet{}, seq1, kSensor) == 0.0);

    ParticleSet unit;
    unit.push_back(Vec3(0, 0, 0), 1.0);
    CHECK(mi_surrogate_score(unit, seq1, kSensor) == doctest::Approx(0.98).epsilon(1e-12));

    RandomSource rng(64);
    ParticleSet p;
    for (int i = 0; i < 50; ++i) {
        p.push_back(Vec3(rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100)),
                    rng.uniform(0.0, 0.1));
    }
    const std::vector<Vec3> seq2 = {Vec3(30, 40, 50), Vec3(42, 40, 50)};
    double oracle = 0.0;
    for (const Vec3& q : seq2) {
        for (int i = 0; i < 50; ++i) {
            const Vec3 scaled = (p.positions[i] - q) / 25.0;
            oracle += p.weights[i] * 0.98 * std::exp(-scaled.norm() / 2.0);
        }
    }
    CHECK(mi_surrogate_score(p, seq2, kSensor) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("MI surrogate scales linearly in the weights") {
    RandomSource rng(65);
    ParticleSet p;
    for (int i = 0; i < 20; ++i) {
        p.push_back(Vec3(rng.uniform(0, 50), rng.uniform(0, 50), rng.uniform(0, 50)),
                    rng.uniform(0.0, 1.0));
    }
    const std::vector<Vec3> seq = {Vec3(10, 10, 10), Vec3(22, 10, 10)};
    const double base = mi_surrogate_score(p, seq, kSensor);
    ParticleSet scaled = p;
    for (double& w : scaled.weights) w *= 3.5;
    CHECK(mi_surrogate_score(scaled, seq, kSensor) == doctest::Approx(3.5 * base).epsilon(1e-12));
}

TEST_CASE("the two refinement scores coincide for unit particles at the centers") {
    std::vector<Cluster> clusters(3);
    clusters[0].center = Vec3(10, 0, 0);
    clusters[1].center = Vec3(0, 20, 0);
    clusters[2].center = Vec3(0, 0, 30);
    ParticleSet p;
    for (const Cluster& c : clusters) p.push_back(c.center, 1.0);
    const std::vector<Vec3> seq = {Vec3(5, 5, 5), Vec3(17, 5, 5)};
    CHECK(center_prob_score(clusters, seq, kSensor) ==
          doctest::Approx(mi_surrogate_score(p, seq, kSensor)).epsilon(1e-12));
}
