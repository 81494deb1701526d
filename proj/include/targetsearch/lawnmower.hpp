#pragma once

#include <vector>

#include "targetsearch/geometry.hpp"

namespace targetsearch {

/// Boustrophedon coverage sweep: rows are sampled every spacing_xy along both
/// in-plane axes, layers are stacked every layer_dz, and the sweep direction
/// alternates so consecutive waypoints always differ along exactly one axis.
/// A 2D environment yields a single layer.
std::vector<Vec3> lawnmower_waypoints(const Environment& env, double spacing_xy, double layer_dz);

}  // namespace targetsearch
