#include "targetsearch/lawnmower.hpp"

#include <cmath>
#include <stdexcept>

namespace targetsearch {

namespace {

std::vector<double> axis_samples(double lo, double hi, double spacing) {
    std::vector<double> samples;
    const int count = static_cast<int>(std::floor((hi - lo) / spacing + 1e-9)) + 1;
    samples.reserve(count);
    for (int i = 0; i < count; ++i) samples.push_back(lo + i * spacing);
    return samples;
}

}  // namespace

std::vector<Vec3> lawnmower_waypoints(const Environment& env, double spacing_xy, double layer_dz) {
    if (!(spacing_xy > 0.0) || !(layer_dz > 0.0)) {
        throw std::invalid_argument("lawnmower spacings must be positive");
    }
    const std::vector<double> xs = axis_samples(env.lower.x(), env.upper.x(), spacing_xy);
    const std::vector<double> ys = axis_samples(env.lower.y(), env.upper.y(), spacing_xy);
    const std::vector<double> zs = env.dimensionality == 2
                                       ? std::vector<double>{env.lower.z()}
                                       : axis_samples(env.lower.z(), env.upper.z(), layer_dz);

    std::vector<Vec3> waypoints;
    waypoints.reserve(xs.size() * ys.size() * zs.size());
    bool x_forward = true;
    bool y_forward = true;
    for (double z : zs) {
        for (std::size_t jy = 0; jy < ys.size(); ++jy) {
            const double y = y_forward ? ys[jy] : ys[ys.size() - 1 - jy];
            for (std::size_t jx = 0; jx < xs.size(); ++jx) {
                const double x = x_forward ? xs[jx] : xs[xs.size() - 1 - jx];
                waypoints.emplace_back(x, y, z);
            }
            x_forward = !x_forward;
        }
        y_forward = !y_forward;
    }
    return waypoints;
}

}  // namespace targetsearch
