// Independent reference implementations used only by tests. These stay
// deliberately naive (full enumeration, direct sums) so they cannot share a
// bug with the library code they check.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "targetsearch/geometry.hpp"

namespace oracles {

using targetsearch::Vec3;

// Direct 8-corner weighted sum for trilinear interpolation on a unit cell.
inline double trilinear_corners(const std::array<double, 8>& corner, double fx, double fy,
                                double fz) {
    double acc = 0.0;
    for (int c = 0; c < 8; ++c) {
        const double wx = (c & 1) ? fx : 1.0 - fx;
        const double wy = (c & 2) ? fy : 1.0 - fy;
        const double wz = (c & 4) ? fz : 1.0 - fz;
        acc += wx * wy * wz * corner[c];
    }
    return acc;
}

// Every length-tau walk over the moveset, kept only if all positions stay in
// the box. Returns the count (the production code prunes prefixes; the oracle
// filters complete walks).
inline int count_contained_walks(const Vec3& start, const std::vector<Vec3>& deltas, int tau,
                                 const targetsearch::Environment& env) {
    const int m = static_cast<int>(deltas.size());
    int total = 1;
    for (int i = 0; i < tau; ++i) total *= m;
    int kept = 0;
    for (int code = 0; code < total; ++code) {
        int c = code;
        Vec3 p = start;
        bool ok = true;
        for (int step = 0; step < tau; ++step) {
            p = p + deltas[c % m];
            c /= m;
            if (!env.contains(p)) {
                ok = false;
                break;
            }
        }
        if (ok) ++kept;
    }
    return kept;
}

// Optimal weighted 2-clustering by exhaustive bipartition (n <= 20): minimizes
// the weighted sum of squared distances to weighted centroids.
struct TwoClusters {
    Vec3 center_a = Vec3::Zero();
    Vec3 center_b = Vec3::Zero();
};

inline TwoClusters best_two_partition(const std::vector<Vec3>& points,
                                      const std::vector<double>& weights) {
    const int n = static_cast<int>(points.size());
    double best_cost = std::numeric_limits<double>::infinity();
    TwoClusters best;
    for (int mask = 1; mask < (1 << n) - 1; ++mask) {
        Vec3 sum_a = Vec3::Zero(), sum_b = Vec3::Zero();
        double mass_a = 0.0, mass_b = 0.0;
        for (int i = 0; i < n; ++i) {
            if (mask & (1 << i)) {
                sum_a += weights[i] * points[i];
                mass_a += weights[i];
            } else {
                sum_b += weights[i] * points[i];
                mass_b += weights[i];
            }
        }
        if (mass_a <= 0.0 || mass_b <= 0.0) continue;
        const Vec3 ca = sum_a / mass_a, cb = sum_b / mass_b;
        double cost = 0.0;
        for (int i = 0; i < n; ++i) {
            const Vec3& c = (mask & (1 << i)) ? ca : cb;
            cost += weights[i] * (points[i] - c).squaredNorm();
        }
        if (cost < best_cost) {
            best_cost = cost;
            best.center_a = ca;
            best.center_b = cb;
        }
    }
    return best;
}

// Exhaustive assignment RMSE for small instances: tries every permutation of
// truth indices over the found list (found <= truth sizes up to 6 or so).
inline double rmse_by_permutations(const std::vector<Vec3>& found, const std::vector<Vec3>& truth,
                                   double penalty) {
    const int nf = static_cast<int>(found.size());
    const int nt = static_cast<int>(truth.size());
    std::vector<int> perm(nt);
    for (int i = 0; i < nt; ++i) perm[i] = i;
    double best = std::numeric_limits<double>::infinity();
    // Also allow leaving found entries unmatched: iterate over subsets of the
    // found list that take a truth partner.
    for (int subset = 0; subset < (1 << nf); ++subset) {
        int take = 0;
        for (int i = 0; i < nf; ++i) {
            if (subset & (1 << i)) ++take;
        }
        if (take > nt) continue;
        std::vector<int> order(perm);
        std::sort(order.begin(), order.end());
        do {
            double cost = 0.0;
            int used = 0;
            for (int i = 0; i < nf; ++i) {
                if (subset & (1 << i)) {
                    cost += (found[i] - truth[order[used]]).squaredNorm();
                    ++used;
                } else {
                    cost += penalty * penalty;
                }
            }
            best = std::min(best, cost);
        } while (std::next_permutation(order.begin(), order.end()));
    }
    return std::sqrt(best / std::max(1, nf));
}

// Scalar double-integrator under the same closed-loop law the tracking
// controller enforces: e'' = -(g1+g2+g3) e' - (1+g1*g2*g3) e.
inline double linear_loop_error_at(double g1, double g2, double g3, double t_end, double dt) {
    double e = 1.0, v = 0.0;
    const double a = g1 + g2 + g3;
    const double b = 1.0 + g1 * g2 * g3;
    const auto acc = [&](double e_, double v_) { return -a * v_ - b * e_; };
    for (double t = 0.0; t < t_end; t += dt) {
        const double k1e = v, k1v = acc(e, v);
        const double k2e = v + 0.5 * dt * k1v, k2v = acc(e + 0.5 * dt * k1e, v + 0.5 * dt * k1v);
        const double k3e = v + 0.5 * dt * k2v, k3v = acc(e + 0.5 * dt * k2e, v + 0.5 * dt * k2v);
        const double k4e = v + dt * k3v, k4v = acc(e + dt * k3e, v + dt * k3v);
        e += dt / 6.0 * (k1e + 2 * k2e + 2 * k3e + k4e);
        v += dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    }
    return std::abs(e);
}

// Row/column/layer counting for the coverage sweep.
inline std::size_t lawnmower_count(const targetsearch::Environment& env, double spacing,
                                   double layer_dz) {
    const auto samples = [](double lo, double hi, double s) {
        return static_cast<std::size_t>(std::floor((hi - lo) / s + 1e-9)) + 1;
    };
    const std::size_t nx = samples(env.lower.x(), env.upper.x(), spacing);
    const std::size_t ny = samples(env.lower.y(), env.upper.y(), spacing);
    const std::size_t nz =
        env.dimensionality == 2 ? 1 : samples(env.lower.z(), env.upper.z(), layer_dz);
    return nx * ny * nz;
}

}  // namespace oracles
