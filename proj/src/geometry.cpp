#include "targetsearch/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace targetsearch {

Environment Environment::box3(const Vec3& lower, const Vec3& upper) {
    Environment env;
    env.lower = lower;
    env.upper = upper;
    env.dimensionality = 3;
    for (int a = 0; a < 3; ++a) {
        if (!(lower[a] < upper[a])) {
            throw std::invalid_argument("environment bounds must satisfy lower < upper");
        }
    }
    return env;
}

Environment Environment::box2(const Eigen::Vector2d& lower, const Eigen::Vector2d& upper,
                              double plane_z) {
    Environment env;
    env.lower = Vec3(lower.x(), lower.y(), plane_z);
    env.upper = Vec3(upper.x(), upper.y(), plane_z);
    env.dimensionality = 2;
    for (int a = 0; a < 2; ++a) {
        if (!(lower[a] < upper[a])) {
            throw std::invalid_argument("environment bounds must satisfy lower < upper");
        }
    }
    return env;
}

bool Environment::contains(const Vec3& p) const {
    const int active = dimensionality == 2 ? 2 : 3;
    for (int a = 0; a < active; ++a) {
        if (p[a] < lower[a] || p[a] > upper[a]) return false;
    }
    return true;
}

Vec3 Environment::clamp(const Vec3& p) const {
    Vec3 out = p;
    const int active = dimensionality == 2 ? 2 : 3;
    for (int a = 0; a < active; ++a) {
        out[a] = std::clamp(out[a], lower[a], upper[a]);
    }
    if (dimensionality == 2) out.z() = lower.z();
    return out;
}

ScalarGrid::ScalarGrid(const Vec3& origin, const Vec3& spacing, std::array<int, 3> dims,
                       double initial_value)
    : origin_(origin), spacing_(spacing), dims_(dims) {
    for (int a = 0; a < 3; ++a) {
        if (dims_[a] < 1) throw std::invalid_argument("grid dims must be >= 1");
        if (dims_[a] > 1 && !(spacing_[a] > 0.0)) {
            throw std::invalid_argument("grid spacing must be positive on active axes");
        }
    }
    values_.assign(static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2], initial_value);
}

ScalarGrid ScalarGrid::cover(const Environment& env, double max_spacing, double initial_value) {
    if (!(max_spacing > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    std::array<int, 3> dims{};
    Vec3 spacing(1.0, 1.0, 1.0);
    const int active = env.dimensionality == 2 ? 2 : 3;
    for (int a = 0; a < 3; ++a) {
        if (a >= active) {
            dims[a] = 1;
            continue;
        }
        const double extent = env.upper[a] - env.lower[a];
        const int cells = std::max(1, static_cast<int>(std::ceil(extent / max_spacing - 1e-9)));
        dims[a] = cells + 1;
        spacing[a] = extent / cells;
    }
    return ScalarGrid(env.lower, spacing, dims, initial_value);
}

std::size_t ScalarGrid::index(int i, int j, int l) const {
    return (static_cast<std::size_t>(l) * dims_[1] + j) * dims_[0] + i;
}

Vec3 ScalarGrid::node_position(int i, int j, int l) const {
    return origin_ + Vec3(i * spacing_[0], j * spacing_[1], l * spacing_[2]);
}

double ScalarGrid::sample(const Vec3& p) const {
    // Per axis: clamp to the extent, split into base cell index and fraction.
    std::array<int, 3> base{};
    std::array<double, 3> frac{};
    for (int a = 0; a < 3; ++a) {
        if (dims_[a] == 1) {
            base[a] = 0;
            frac[a] = 0.0;
            continue;
        }
        double t = (p[a] - origin_[a]) / spacing_[a];
        t = std::clamp(t, 0.0, static_cast<double>(dims_[a] - 1));
        int cell = static_cast<int>(std::floor(t));
        cell = std::min(cell, dims_[a] - 2);
        base[a] = cell;
        frac[a] = t - cell;
    }

    double acc = 0.0;
    for (int corner = 0; corner < 8; ++corner) {
        const int di = corner & 1;
        const int dj = (corner >> 1) & 1;
        const int dl = (corner >> 2) & 1;
        if ((di && dims_[0] == 1) || (dj && dims_[1] == 1) || (dl && dims_[2] == 1)) continue;
        const double w = (di ? frac[0] : 1.0 - frac[0]) * (dj ? frac[1] : 1.0 - frac[1]) *
                         (dl ? frac[2] : 1.0 - frac[2]);
        if (w == 0.0) continue;
        acc += w * values_[index(base[0] + di, base[1] + dj, base[2] + dl)];
    }
    return acc;
}

}  // namespace targetsearch
